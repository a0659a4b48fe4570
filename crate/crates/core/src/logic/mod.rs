//! First-order formulas over natural numbers and their compilation to
//! multi-track automata.
//!
//! Atoms are relations between terms, applications of registered predicate
//! automata (`$name(t1, .., tk)`), and output tests on registered DFAOs
//! (`NAME[t] = @v`). Terms are variables, constants, sums, subtraction of a
//! constant, and floor division by a constant. Free variables are assigned
//! tracks in ascending name order.

mod compile;
mod morphism;
mod parse;

use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::automata::{AutomataError, Dfa};
use crate::dfao::Dfao;

pub use morphism::{fixed_point_dfao, Morphism, MorphismError};
pub use parse::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Const(BigUint),
    Add(Box<Term>, Box<Term>),
    /// `t - c`; an atom mentioning an underflowing subtraction is false.
    SubConst(Box<Term>, BigUint),
    /// `t / c`, rounding down; `c` is at least one.
    DivConst(Box<Term>, BigUint),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Rel(Term, Rel, Term),
    /// `name[t] = @value`: the registered DFAO outputs `value` at `t`.
    DfaoEq { name: String, arg: Term, value: i64 },
    /// `$name(t1, .., tk)`: the registered predicate holds of the terms.
    Call { name: String, args: Vec<Term> },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
}

impl Formula {
    pub fn parse(text: &str) -> Result<Formula, ParseError> {
        parse::parse_formula(text)
    }

    /// Free variables in ascending name order.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out.into_iter().collect()
    }

    fn collect_free(
        &self,
        bound: &mut Vec<String>,
        out: &mut std::collections::BTreeSet<String>,
    ) {
        match self {
            Formula::Rel(t1, _, t2) => {
                t1.collect_vars(bound, out);
                t2.collect_vars(bound, out);
            }
            Formula::DfaoEq { arg, .. } => arg.collect_vars(bound, out),
            Formula::Call { args, .. } => {
                for a in args {
                    a.collect_vars(bound, out);
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(vars, f) | Formula::Forall(vars, f) => {
                let depth = bound.len();
                bound.extend(vars.iter().cloned());
                f.collect_free(bound, out);
                bound.truncate(depth);
            }
        }
    }
}

impl Term {
    fn collect_vars(&self, bound: &[String], out: &mut std::collections::BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
            Term::Const(_) => {}
            Term::Add(a, b) => {
                a.collect_vars(bound, out);
                b.collect_vars(bound, out);
            }
            Term::SubConst(t, _) | Term::DivConst(t, _) => t.collect_vars(bound, out),
        }
    }
}

/// A compiled formula: a minimal, zero-saturated DFA together with the free
/// variables its tracks represent, in ascending name order.
#[derive(Clone, Debug)]
pub struct CompiledFormula {
    pub dfa: Dfa,
    pub vars: Vec<String>,
}

/// A named predicate automaton; `params` lists the defining formula's free
/// variables in track order.
#[derive(Clone, Debug)]
pub struct Predicate {
    pub dfa: Dfa,
    pub params: Vec<String>,
}

/// Named DFAOs and predicate automata available to the compiler.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    dfaos: BTreeMap<String, Dfao>,
    predicates: BTreeMap<String, Predicate>,
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    pub fn add_dfao(&mut self, name: &str, dfao: Dfao) {
        self.dfaos.insert(name.to_string(), dfao);
    }

    pub fn add_predicate(&mut self, name: &str, compiled: CompiledFormula) {
        self.predicates
            .insert(name.to_string(), Predicate { dfa: compiled.dfa, params: compiled.vars });
    }

    pub fn dfao(&self, name: &str) -> Option<&Dfao> {
        self.dfaos.get(name)
    }

    pub fn predicate(&self, name: &str) -> Option<&Predicate> {
        self.predicates.get(name)
    }

    pub fn dfao_names(&self) -> impl Iterator<Item = &str> {
        self.dfaos.keys().map(String::as_str)
    }

    pub fn predicate_names(&self) -> impl Iterator<Item = &str> {
        self.predicates.keys().map(String::as_str)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CompileError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("formula has no free variables")]
    NoFreeVariables,
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("unknown DFAO `{0}`")]
    UnknownDfao(String),
    #[error("`{name}` expects {expected} arguments, got {got}")]
    ArityMismatch { name: String, expected: usize, got: usize },
    #[error("intermediate automaton would exceed {0} tracks")]
    TooManyTracks(usize),
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

/// Compiles a formula with at least one free variable into a minimal,
/// zero-saturated DFA over its free variables in ascending name order.
pub fn compile(formula: &Formula, registry: &Registry) -> Result<CompiledFormula, CompileError> {
    compile::compile(formula, registry)
}

/// Parses and compiles formula text in one step.
pub fn compile_text(text: &str, registry: &Registry) -> Result<CompiledFormula, CompileError> {
    compile(&Formula::parse(text)?, registry)
}
