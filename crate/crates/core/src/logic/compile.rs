//! Formula-to-automaton translation.
//!
//! Compilation is bottom-up. Every subformula becomes either a truth constant
//! (no free variables left) or a DFA over its free variables in ascending
//! name order, one track per variable. Compound terms are flattened first:
//! each operator application gets a fresh helper variable (named `%0`, `%1`,
//! .. so it can never collide with a source variable) plus a defining
//! constraint, and the helpers are existentially projected away as soon as no
//! pending constraint mentions them, which keeps track counts low.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{CompileError, CompiledFormula, Formula, Registry, Rel, Term};
use crate::automata::{BoolOp, Dfa};
use crate::numeration::MAX_TRACKS;

pub(super) fn compile(
    formula: &Formula,
    registry: &Registry,
) -> Result<CompiledFormula, CompileError> {
    let mut ctx = Ctx { registry, fresh: 0 };
    match ctx.formula(formula)? {
        Compiled::Truth(_) => Err(CompileError::NoFreeVariables),
        Compiled::Dfa { dfa, vars } => Ok(CompiledFormula { dfa, vars }),
    }
}

/// A compiled subformula. Sentences fold to `Truth`; anything with free
/// variables is an automaton whose track `i` carries `vars[i]` (sorted).
enum Compiled {
    Truth(bool),
    Dfa { dfa: Dfa, vars: Vec<String> },
}

impl Compiled {
    fn mentions(&self, v: &str) -> bool {
        match self {
            Compiled::Truth(_) => false,
            Compiled::Dfa { vars, .. } => vars.iter().any(|x| x == v),
        }
    }
}

struct Ctx<'a> {
    registry: &'a Registry,
    fresh: usize,
}

impl<'a> Ctx<'a> {
    fn formula(&mut self, f: &Formula) -> Result<Compiled, CompileError> {
        match f {
            Formula::Rel(t1, rel, t2) => self.rel(t1, *rel, t2),
            Formula::DfaoEq { name, arg, value } => self.dfao_eq(name, arg, *value),
            Formula::Call { name, args } => self.call(name, args),
            Formula::Not(g) => Ok(negate(self.formula(g)?)),
            Formula::And(a, b) => {
                let l = self.formula(a)?;
                let r = self.formula(b)?;
                combine(l, r, BoolOp::And)
            }
            Formula::Or(a, b) => {
                let l = self.formula(a)?;
                let r = self.formula(b)?;
                combine(l, r, BoolOp::Or)
            }
            Formula::Implies(a, b) => {
                let l = self.formula(a)?;
                let r = self.formula(b)?;
                combine(l, r, BoolOp::Implies)
            }
            Formula::Exists(vars, body) => {
                let mut c = self.formula(body)?;
                for v in vars {
                    c = project_var(c, v)?;
                }
                Ok(c)
            }
            Formula::Forall(vars, body) => {
                // A x φ  ≡  ~E x ~φ
                let mut c = negate(self.formula(body)?);
                for v in vars {
                    c = project_var(c, v)?;
                }
                Ok(negate(c))
            }
        }
    }

    fn rel(&mut self, t1: &Term, rel: Rel, t2: &Term) -> Result<Compiled, CompileError> {
        let mut defs = Vec::new();
        let a = self.lower_term(t1, &mut defs)?;
        let b = self.lower_term(t2, &mut defs)?;
        let base = match rel {
            Rel::Eq => self.template(&Dfa::eq(), &[a, b], &mut defs)?,
            Rel::Ne => negate(self.template(&Dfa::eq(), &[a, b], &mut defs)?),
            Rel::Lt => self.template(&Dfa::lt(), &[a, b], &mut defs)?,
            Rel::Le => negate(self.template(&Dfa::lt(), &[b, a], &mut defs)?),
            Rel::Gt => self.template(&Dfa::lt(), &[b, a], &mut defs)?,
            Rel::Ge => negate(self.template(&Dfa::lt(), &[a, b], &mut defs)?),
        };
        self.finish_atom(base, defs)
    }

    fn dfao_eq(&mut self, name: &str, arg: &Term, value: i64) -> Result<Compiled, CompileError> {
        let registry = self.registry;
        let dfao = registry
            .dfao(name)
            .ok_or_else(|| CompileError::UnknownDfao(name.to_string()))?;
        let pred = dfao.value_predicate(value);
        let mut defs = Vec::new();
        let a = self.lower_term(arg, &mut defs)?;
        let base = self.template(&pred, &[a], &mut defs)?;
        self.finish_atom(base, defs)
    }

    fn call(&mut self, name: &str, args: &[Term]) -> Result<Compiled, CompileError> {
        let registry = self.registry;
        let pred = registry
            .predicate(name)
            .ok_or_else(|| CompileError::UnknownPredicate(name.to_string()))?;
        if args.len() != pred.params.len() {
            return Err(CompileError::ArityMismatch {
                name: name.to_string(),
                expected: pred.params.len(),
                got: args.len(),
            });
        }
        let mut defs = Vec::new();
        let names = args
            .iter()
            .map(|a| self.lower_term(a, &mut defs))
            .collect::<Result<Vec<_>, _>>()?;
        let base = self.template(&pred.dfa, &names, &mut defs)?;
        self.finish_atom(base, defs)
    }

    /// Conjoins the pending term definitions onto `base`, projecting each
    /// helper variable as soon as nothing pending mentions it.
    fn finish_atom(
        &mut self,
        base: Compiled,
        mut defs: Vec<Compiled>,
    ) -> Result<Compiled, CompileError> {
        let mut acc = base;
        loop {
            while let Some(var) = next_helper(&acc, &defs) {
                acc = project_var(acc, &var)?;
            }
            match defs.pop() {
                Some(d) => acc = combine(acc, d, BoolOp::And)?,
                None => return Ok(acc),
            }
        }
    }

    fn fresh_var(&mut self) -> String {
        let v = format!("%{}", self.fresh);
        self.fresh += 1;
        v
    }

    /// Reduces a term to a variable carrying its value, recording defining
    /// constraints for every introduced helper.
    fn lower_term(&mut self, t: &Term, defs: &mut Vec<Compiled>) -> Result<String, CompileError> {
        match t {
            Term::Var(v) => Ok(v.clone()),
            Term::Const(c) => Ok(self.constant_var(c, defs)),
            Term::Add(x, y) => {
                let a = self.lower_term(x, defs)?;
                let b = self.lower_term(y, defs)?;
                let sum = self.fresh_var();
                let d = self.template(&Dfa::add(), &[a, b, sum.clone()], defs)?;
                defs.push(d);
                Ok(sum)
            }
            Term::SubConst(x, c) => {
                if c.is_zero() {
                    return self.lower_term(x, defs);
                }
                // z = x − c  ⟺  z + c = x; no witness when x < c.
                let a = self.lower_term(x, defs)?;
                let u = self.constant_var(c, defs);
                let z = self.fresh_var();
                let d = self.template(&Dfa::add(), &[z.clone(), u, a], defs)?;
                defs.push(d);
                Ok(z)
            }
            Term::DivConst(x, c) => {
                assert!(!c.is_zero(), "division by zero in a term");
                if c.is_one() {
                    return self.lower_term(x, defs);
                }
                // q = ⌊x/c⌋  ⟺  c·q + r = x ∧ r < c.
                let a = self.lower_term(x, defs)?;
                let q = self.fresh_var();
                let r = self.fresh_var();
                let cq = self.mult_const(&q, c, defs)?;
                let d = self.template(&Dfa::add(), &[cq, r.clone(), a], defs)?;
                defs.push(d);
                let u = self.constant_var(c, defs);
                let d = self.template(&Dfa::lt(), &[r, u], defs)?;
                defs.push(d);
                Ok(q)
            }
        }
    }

    fn constant_var(&mut self, c: &BigUint, defs: &mut Vec<Compiled>) -> String {
        let u = self.fresh_var();
        defs.push(Compiled::Dfa { dfa: Dfa::constant(c.clone()), vars: vec![u.clone()] });
        u
    }

    /// A variable constrained to `c·x` (`c ≥ 1`), by doubling along the
    /// binary expansion of `c`.
    fn mult_const(
        &mut self,
        x: &str,
        c: &BigUint,
        defs: &mut Vec<Compiled>,
    ) -> Result<String, CompileError> {
        if c.is_one() {
            return Ok(x.to_string());
        }
        let bits = c.to_radix_be(2);
        let mut acc = x.to_string();
        for &bit in &bits[1..] {
            let doubled = self.fresh_var();
            let d = self.template(&Dfa::add(), &[acc.clone(), acc, doubled.clone()], defs)?;
            defs.push(d);
            acc = doubled;
            if bit == 1 {
                let bumped = self.fresh_var();
                let d =
                    self.template(&Dfa::add(), &[acc, x.to_string(), bumped.clone()], defs)?;
                defs.push(d);
                acc = bumped;
            }
        }
        Ok(acc)
    }

    /// Binds the tracks of `base` to the given variables. Repeated variables
    /// are split with fresh aliases (plus `eq` constraints in `defs`), and
    /// tracks are permuted into ascending variable order.
    fn template(
        &mut self,
        base: &Dfa,
        names: &[String],
        defs: &mut Vec<Compiled>,
    ) -> Result<Compiled, CompileError> {
        assert_eq!(base.tracks(), names.len());
        let mut unique: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            if unique.contains(n) {
                let alias = self.fresh_var();
                defs.push(raw_template(&Dfa::eq(), &[n.clone(), alias.clone()]));
                unique.push(alias);
            } else {
                unique.push(n.clone());
            }
        }
        Ok(raw_template(base, &unique))
    }
}

/// `base` with its tracks relabeled by distinct `names` and reordered so the
/// names are ascending.
fn raw_template(base: &Dfa, names: &[String]) -> Compiled {
    let mut sorted = names.to_vec();
    sorted.sort();
    let dest: Vec<usize> = names
        .iter()
        .map(|n| sorted.binary_search(n).expect("name present"))
        .collect();
    let dfa = if dest.iter().enumerate().all(|(i, &d)| i == d) {
        base.clone()
    } else {
        base.permute_tracks(&dest).minimized()
    };
    Compiled::Dfa { dfa, vars: sorted }
}

/// First helper variable of `acc` that no pending definition mentions.
fn next_helper(acc: &Compiled, defs: &[Compiled]) -> Option<String> {
    let Compiled::Dfa { vars, .. } = acc else { return None };
    vars.iter()
        .find(|v| v.starts_with('%') && !defs.iter().any(|d| d.mentions(v)))
        .cloned()
}

fn negate(c: Compiled) -> Compiled {
    match c {
        Compiled::Truth(t) => Compiled::Truth(!t),
        Compiled::Dfa { dfa, vars } => Compiled::Dfa { dfa: dfa.complement(), vars },
    }
}

/// Existentially quantifies `var` away; a last remaining track folds to a
/// truth constant via an emptiness check.
fn project_var(c: Compiled, var: &str) -> Result<Compiled, CompileError> {
    match c {
        Compiled::Truth(t) => Ok(Compiled::Truth(t)),
        Compiled::Dfa { dfa, mut vars } => {
            let Some(idx) = vars.iter().position(|v| v == var) else {
                return Ok(Compiled::Dfa { dfa, vars });
            };
            if vars.len() == 1 {
                return Ok(Compiled::Truth(!dfa.is_empty_language()));
            }
            let projected = dfa.project_exists(idx)?;
            vars.remove(idx);
            Ok(Compiled::Dfa { dfa: projected, vars })
        }
    }
}

fn combine(a: Compiled, b: Compiled, op: BoolOp) -> Result<Compiled, CompileError> {
    use Compiled::{Dfa as CDfa, Truth};
    Ok(match (a, b) {
        (Truth(x), Truth(y)) => Truth(op.apply(x, y)),
        (Truth(x), d @ CDfa { .. }) => match (op, x) {
            (BoolOp::And, true) | (BoolOp::Or, false) | (BoolOp::Implies, true) => d,
            (BoolOp::And, false) => Truth(false),
            (BoolOp::Or, true) | (BoolOp::Implies, false) => Truth(true),
            (BoolOp::Xor, false) => d,
            (BoolOp::Xor, true) => negate(d),
        },
        (d @ CDfa { .. }, Truth(y)) => match (op, y) {
            (BoolOp::And, true) | (BoolOp::Or, false) => d,
            (BoolOp::And, false) => Truth(false),
            (BoolOp::Or, true) | (BoolOp::Implies, true) => Truth(true),
            (BoolOp::Implies, false) | (BoolOp::Xor, true) => negate(d),
            (BoolOp::Xor, false) => d,
        },
        (CDfa { dfa: da, vars: va }, CDfa { dfa: db, vars: vb }) => {
            let union = merge_vars(&va, &vb);
            if union.len() > MAX_TRACKS {
                return Err(CompileError::TooManyTracks(MAX_TRACKS));
            }
            let ea = embed(&da, &va, &union);
            let eb = embed(&db, &vb, &union);
            CDfa { dfa: ea.product(&eb, op)?.minimized(), vars: union }
        }
    })
}

/// Cylindrifies `dfa` (over sorted `vars`) to the sorted superset `union`.
fn embed(dfa: &Dfa, vars: &[String], union: &[String]) -> Dfa {
    if vars == union {
        return dfa.clone();
    }
    let positions: Vec<usize> = vars
        .iter()
        .map(|v| union.binary_search(v).expect("var in union"))
        .collect();
    dfa.spread_tracks(union.len(), &positions)
}

fn merge_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
