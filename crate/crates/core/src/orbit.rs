//! Output automaton synthesis by forward closure of a linear representation.
//!
//! The forward orbit of (v, γ, w) is the set of row vectors v·γ(x) over all
//! words x. When it is finite the word function is computed by a complete
//! deterministic automaton with output: one state per distinct vector,
//! output u·w. Nothing guarantees finiteness in general, so exploration
//! carries an explicit state bound.

use std::collections::{BTreeSet, HashMap};

use num_traits::ToPrimitive;

use crate::automata::Dfa;
use crate::dfao::Dfao;
use crate::linrep::{LinRep, Rational};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OrbitError {
    #[error("orbit exceeded the state bound {0}")]
    BoundExceeded(usize),
    #[error("orbit vector produced a non-integer output")]
    NonIntegerOutput,
}

/// Breadth-first closure of the orbit, digit 0 explored before digit 1, so
/// state numbering (and the rendered text) is canonical for a given
/// representation. Vectors are compared exactly; rationals are kept in
/// lowest terms by construction, so structural equality is value equality.
pub fn orbit_dfao(rep: &LinRep, bound: usize) -> Result<Dfao, OrbitError> {
    if bound == 0 {
        return Err(OrbitError::BoundExceeded(0));
    }
    if rep.rank() == 0 {
        // The zero function: one state, both digits loop, output 0.
        let dfa = Dfa::new(1, 0, vec![false], vec![0, 0]);
        return Ok(Dfao::new(dfa, vec![0]));
    }
    let mut states: Vec<Vec<Rational>> = vec![rep.v_vec().to_vec()];
    let mut index: HashMap<Vec<Rational>, u32> = HashMap::new();
    index.insert(states[0].clone(), 0);
    let mut next: Vec<u32> = Vec::new();
    let mut cursor = 0;
    while cursor < states.len() {
        for d in 0..2 {
            let image = rep.step(&states[cursor], d);
            let target = match index.get(&image) {
                Some(&t) => t,
                None => {
                    if states.len() >= bound {
                        return Err(OrbitError::BoundExceeded(bound));
                    }
                    let t = states.len() as u32;
                    index.insert(image.clone(), t);
                    states.push(image);
                    t
                }
            };
            next.push(target);
        }
        cursor += 1;
    }
    let mut outputs = Vec::with_capacity(states.len());
    for u in &states {
        let value = rep.output(u);
        if !value.is_integer() {
            return Err(OrbitError::NonIntegerOutput);
        }
        // Outputs beyond machine range are as unusable as fractions.
        let out = value.to_integer().to_i64().ok_or(OrbitError::NonIntegerOutput)?;
        outputs.push(out);
    }
    let dfa = Dfa::new(1, 0, vec![false; states.len()], next);
    Ok(Dfao::new(dfa, outputs))
}

/// The set of outputs over reachable states.
pub fn output_range(m: &Dfao) -> BTreeSet<i64> {
    let dfa = m.dfa();
    let mut seen = vec![false; dfa.states()];
    let mut stack = vec![dfa.initial()];
    seen[dfa.initial()] = true;
    let mut range = BTreeSet::new();
    while let Some(s) = stack.pop() {
        range.insert(m.output(s));
        for letter in 0..dfa.alphabet() {
            let t = dfa.next(s, letter as u16);
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    range
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linrep::count_rep;
    use crate::session::default_registry;
    use num_bigint::BigInt;

    fn int(x: i64) -> Rational {
        Rational::from_integer(BigInt::from(x))
    }

    #[test]
    fn membership_counting_orbit_recovers_the_automaton() {
        let reg = default_registry();
        let in_f = reg.dfao("FF").unwrap().value_predicate(1);
        let rep = count_rep(&in_f, 0).unwrap();
        let m = orbit_dfao(&rep, 1000).unwrap();
        assert_eq!(output_range(&m), BTreeSet::from([0, 1]));
        for n in 0..4096u64 {
            let by_rep = rep.evaluate_u64(n);
            let by_m = int(m.value_u64(n));
            assert_eq!(by_rep, by_m, "n={n}");
        }
        // Deterministic construction: a second run renders identically.
        let again = orbit_dfao(&rep, 1000).unwrap();
        assert_eq!(m.to_text(), again.to_text());
    }

    #[test]
    fn constant_function_has_a_one_state_orbit() {
        let one = count_rep(&Dfa::eq(), 1).unwrap().minimized();
        assert_eq!(one.rank(), 1);
        let m = orbit_dfao(&one, 10).unwrap();
        assert_eq!(m.states(), 1);
        assert_eq!(output_range(&m), BTreeSet::from([1]));
    }

    #[test]
    fn unbounded_values_exceed_any_bound() {
        // #{x : x < n} = n takes infinitely many values: no finite orbit.
        let below = count_rep(&Dfa::lt(), 1).unwrap().minimized();
        assert_eq!(orbit_dfao(&below, 100), Err(OrbitError::BoundExceeded(100)));
    }

    #[test]
    fn zero_representation_is_a_single_zero_state() {
        let zero = count_rep(&Dfa::empty_language(1), 0).unwrap();
        let m = orbit_dfao(&zero, 10).unwrap();
        assert_eq!(m.states(), 1);
        assert_eq!(m.value_u64(123), 0);
        assert_eq!(output_range(&m), BTreeSet::from([0]));
    }

    #[test]
    fn fractional_outputs_are_rejected() {
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        let rep = LinRep::from_dense(
            vec![int(1)],
            vec![vec![int(1)]],
            vec![vec![int(1)]],
            vec![half],
        );
        assert_eq!(orbit_dfao(&rep, 10), Err(OrbitError::NonIntegerOutput));
    }
}
