//! Python bindings: formula compilation, counting representations, orbit
//! automata, the brute-force oracle, and the full verification report.
//!
//! Values that are mathematically integers cross the boundary as Python
//! ints (arbitrary precision); exact rationals in reports are rendered as
//! `num/den` strings so callers can feed them to `fractions.Fraction`.

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use dombi_core::linrep::count_rep;
use dombi_core::logic::{compile_text, CompiledFormula};
use dombi_core::numeration::align_values;
use dombi_core::orbit::{orbit_dfao, output_range};
use dombi_core::pipeline::{MemoryCache, Pipeline};
use dombi_core::session::{build_registry, DEFAULT_SESSION};
use dombi_core::verify::{verify_theorem, VerifyLimits, EXPECTED_RANGE};
use dombi_core::{fixture, oracle};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_error(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn integer_of(value: dombi_core::Rational) -> PyResult<BigInt> {
    if !value.is_integer() {
        return Err(PyValueError::new_err(format!("non-integer value {value}")));
    }
    Ok(value.to_integer())
}

/// A compiled formula: a complete minimal DFA over tuple tracks, one per
/// free variable in ascending name order.
#[pyclass(name = "Predicate", frozen)]
struct PyPredicate {
    inner: CompiledFormula,
}

#[pymethods]
impl PyPredicate {
    fn states(&self) -> usize {
        self.inner.dfa.states()
    }

    fn tracks(&self) -> usize {
        self.inner.dfa.tracks()
    }

    fn vars(&self) -> Vec<String> {
        self.inner.vars.clone()
    }

    /// Does the formula hold at these variable values (in `vars()` order)?
    fn accepts(&self, values: Vec<u64>) -> PyResult<bool> {
        if values.len() != self.inner.vars.len() {
            return Err(PyValueError::new_err(format!(
                "expected {} values, got {}",
                self.inner.vars.len(),
                values.len()
            )));
        }
        self.inner.dfa.accepts(&align_values(&values)).map_err(value_error)
    }

    /// Counting representation of n -> #{other vars : formula holds}, where
    /// `var` is the variable kept as the argument.
    fn count(&self, var: &str) -> PyResult<PyLinRep> {
        let kept = self
            .inner
            .vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| PyValueError::new_err(format!("unknown variable {var:?}")))?;
        let rep = count_rep(&self.inner.dfa, kept).map_err(value_error)?;
        Ok(PyLinRep { inner: rep })
    }

    fn to_text(&self) -> String {
        self.inner.dfa.to_text()
    }

    fn to_dot(&self) -> String {
        self.inner.dfa.to_dot()
    }

    fn __repr__(&self) -> String {
        format!("Predicate(vars={:?}, states={})", self.inner.vars, self.inner.dfa.states())
    }
}

/// A linear representation v, (gamma_0, gamma_1), w over exact rationals.
#[pyclass(name = "LinRep", frozen)]
struct PyLinRep {
    inner: dombi_core::LinRep,
}

#[pymethods]
impl PyLinRep {
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<PyLinRep> {
        Ok(PyLinRep { inner: dombi_core::LinRep::from_text(text).map_err(value_error)? })
    }

    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn evaluate(&self, n: u64) -> PyResult<BigInt> {
        integer_of(self.inner.evaluate_u64(n))
    }

    fn minimized(&self) -> PyLinRep {
        PyLinRep { inner: self.inner.minimized() }
    }

    /// Integer combination of representations: sum of coeff * rep.
    #[staticmethod]
    fn combine(terms: Vec<(i64, PyRef<'_, PyLinRep>)>) -> PyResult<PyLinRep> {
        let parts: Vec<(i64, &dombi_core::LinRep)> =
            terms.iter().map(|(c, r)| (*c, &r.inner)).collect();
        if parts.is_empty() {
            return Err(PyValueError::new_err("combine needs at least one term"));
        }
        Ok(PyLinRep { inner: dombi_core::LinRep::combine(&parts) })
    }

    /// Synthesize the output automaton from the orbit of the state vector;
    /// fails if more than `bound` distinct vectors appear.
    #[pyo3(signature = (bound = 100_000))]
    fn orbit(&self, bound: usize) -> PyResult<PyDfao> {
        Ok(PyDfao { inner: orbit_dfao(&self.inner, bound).map_err(runtime_error)? })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!("LinRep(rank={})", self.inner.rank())
    }
}

/// A complete DFA with an integer output attached to every state.
#[pyclass(name = "Dfao", frozen)]
struct PyDfao {
    inner: dombi_core::Dfao,
}

#[pymethods]
impl PyDfao {
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<PyDfao> {
        Ok(PyDfao { inner: dombi_core::Dfao::from_text(text).map_err(value_error)? })
    }

    fn states(&self) -> usize {
        self.inner.states()
    }

    fn value(&self, n: u64) -> i64 {
        self.inner.value_u64(n)
    }

    /// All outputs reachable from the initial state, ascending.
    fn range(&self) -> Vec<i64> {
        output_range(&self.inner).into_iter().collect()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }

    fn __repr__(&self) -> String {
        format!("Dfao(states={})", self.inner.states())
    }
}

/// The artifact pipeline over an in-memory cache.
#[pyclass(name = "Pipeline", frozen)]
struct PyPipeline {
    inner: Pipeline,
}

#[pymethods]
impl PyPipeline {
    #[new]
    #[pyo3(signature = (session = None))]
    fn new(session: Option<&str>) -> PyResult<Self> {
        let inner = Pipeline::new(session.unwrap_or(DEFAULT_SESSION), Box::new(MemoryCache::default()))
            .map_err(value_error)?;
        Ok(PyPipeline { inner })
    }

    fn session(&self) -> String {
        self.inner.session().to_string()
    }

    /// Evaluate a counting target (r3an, r3anm1, r3an4, r3an4m1, f) at n.
    fn eval(&self, target: &str, n: u64) -> PyResult<BigInt> {
        integer_of(self.inner.eval(target, n).map_err(runtime_error)?)
    }

    /// Render an artifact (F, FF, G, M, reps) in text or dot form.
    #[pyo3(signature = (name, format = "text"))]
    fn artifact(&self, name: &str, format: &str) -> PyResult<String> {
        match format {
            "text" => self.inner.artifact_text(name).map_err(runtime_error),
            "dot" => self.inner.artifact_dot(name).map_err(runtime_error),
            other => Err(PyValueError::new_err(format!("unknown format {other:?}"))),
        }
    }

    fn raw_ranks(&self) -> PyResult<Vec<usize>> {
        Ok(self.inner.raw_reps().map_err(runtime_error)?.iter().map(|r| r.rank()).collect())
    }

    fn combined_rank(&self) -> PyResult<usize> {
        Ok(self.inner.combined_raw().map_err(runtime_error)?.rank())
    }

    fn minimized_rank(&self) -> PyResult<usize> {
        Ok(self.inner.minimized().map_err(runtime_error)?.rank())
    }

    #[pyo3(signature = (bound = 100_000))]
    fn orbit_states(&self, bound: usize) -> PyResult<usize> {
        Ok(self.inner.orbit(bound).map_err(runtime_error)?.states())
    }

    fn __repr__(&self) -> String {
        "Pipeline()".to_string()
    }
}

/// Compile a first-order formula against a session (the built-in one by
/// default).
#[pyfunction]
#[pyo3(signature = (formula, session = None))]
fn compile(formula: &str, session: Option<&str>) -> PyResult<PyPredicate> {
    let registry = build_registry(session.unwrap_or(DEFAULT_SESSION)).map_err(value_error)?;
    let inner = compile_text(formula, &registry).map_err(value_error)?;
    Ok(PyPredicate { inner })
}

/// Run every verification milestone and return the report as a dict.
#[pyfunction]
#[pyo3(signature = (agreement = 10_000, density_depth = 10, orbit_bound = 100_000, session = None))]
fn verify(
    py: Python<'_>,
    agreement: usize,
    density_depth: u32,
    orbit_bound: usize,
    session: Option<&str>,
) -> PyResult<Py<PyDict>> {
    if !(1..=13).contains(&density_depth) {
        return Err(PyValueError::new_err("density_depth must be in 1..=13"));
    }
    let pipeline = Pipeline::new(session.unwrap_or(DEFAULT_SESSION), Box::new(MemoryCache::default()))
        .map_err(value_error)?;
    let limits = VerifyLimits { agreement, density_depth, orbit_bound };
    let report = verify_theorem(&pipeline, &limits).map_err(runtime_error)?;
    let out = PyDict::new(py);
    let milestones = PyList::empty(py);
    for m in &report.milestones {
        let item = PyDict::new(py);
        item.set_item("name", &m.name)?;
        item.set_item("expected", &m.expected)?;
        item.set_item("measured", &m.measured)?;
        item.set_item("hard", m.hard)?;
        item.set_item("pass", m.pass)?;
        milestones.append(item)?;
    }
    out.set_item("milestones", milestones)?;
    out.set_item("verdict", &report.verdict)?;
    Ok(out.into())
}

/// Is n in the excluded set F?
#[pyfunction]
fn member_f(n: u64) -> bool {
    oracle::member_f(n)
}

/// Brute-force r(3, N \ F, n) for n < limit.
#[pyfunction]
fn oracle_r3(limit: usize) -> PyResult<Vec<u64>> {
    if limit == 0 {
        return Err(PyValueError::new_err("limit must be positive"));
    }
    Ok(oracle::oracle_r3(limit).r3)
}

/// Brute-force first difference d(n) for n < limit.
#[pyfunction]
fn oracle_d(limit: usize) -> PyResult<Vec<i64>> {
    if limit == 0 {
        return Err(PyValueError::new_err("limit must be positive"));
    }
    Ok(oracle::oracle_r3(limit).d)
}

/// Brute-force f(n) = d(n) - 4 d(n//4) for n < limit.
#[pyfunction]
fn oracle_f(limit: usize) -> PyResult<Vec<i64>> {
    if limit == 0 {
        return Err(PyValueError::new_err("limit must be positive"));
    }
    Ok(oracle::oracle_f(limit))
}

/// Exact density checkpoints of F up to depth k, as a dict with `num/den`
/// strings for the exact fractions.
#[pyfunction]
#[pyo3(signature = (depth = 10))]
fn density_report(py: Python<'_>, depth: u32) -> PyResult<Py<PyDict>> {
    if !(1..=13).contains(&depth) {
        return Err(PyValueError::new_err("depth must be in 1..=13"));
    }
    let report = oracle::density_report(depth);
    let render = |cs: &[oracle::DensityCheckpoint]| -> PyResult<Py<PyList>> {
        let list = PyList::empty(py);
        for c in cs {
            let item = PyDict::new(py);
            item.set_item("n", c.n)?;
            item.set_item("count", c.count)?;
            item.set_item("density", c.density.to_string())?;
            item.set_item("expected", c.expected.to_string())?;
            list.append(item)?;
        }
        Ok(list.into())
    };
    let out = PyDict::new(py);
    out.set_item("depth", report.depth)?;
    out.set_item("lower", render(&report.lower)?)?;
    out.set_item("upper", render(&report.upper)?)?;
    Ok(out.into())
}

/// The fixed rank-16 reference representation of the difference function.
#[pyfunction]
fn reference_rep() -> PyLinRep {
    PyLinRep { inner: fixture::reference() }
}

/// The 28 values the difference function attains.
#[pyfunction]
fn expected_range() -> Vec<i64> {
    EXPECTED_RANGE.to_vec()
}

/// The built-in session text.
#[pyfunction]
fn default_session() -> &'static str {
    DEFAULT_SESSION
}

#[pymodule]
fn dombi_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPredicate>()?;
    m.add_class::<PyLinRep>()?;
    m.add_class::<PyDfao>()?;
    m.add_class::<PyPipeline>()?;
    m.add_function(wrap_pyfunction!(compile, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(member_f, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_r3, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_d, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_f, m)?)?;
    m.add_function(wrap_pyfunction!(density_report, m)?)?;
    m.add_function(wrap_pyfunction!(reference_rep, m)?)?;
    m.add_function(wrap_pyfunction!(expected_range, m)?)?;
    m.add_function(wrap_pyfunction!(default_session, m)?)?;
    Ok(())
}
