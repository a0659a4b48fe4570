//! Randomized invariants: the compiler against a direct evaluator, boolean
//! and quantifier laws, leading-zero invariance, minimization soundness for
//! automata and representations, and the membership oracle against the
//! session automata.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use dombi_core::linrep::count_rep;
use dombi_core::logic::{compile_text, CompiledFormula, Registry};
use dombi_core::numeration::{align_values, decode, encode_u64, Word};
use dombi_core::oracle;
use dombi_core::session::default_registry;
use dombi_core::{Dfa, LinRep, Rational};

/// Atomic formulas over x and y, paired with their meaning. Every atom
/// mentions both variables' truth is eventually constant in x once
/// x > 4y + 17, so bounded search below that decides quantifiers exactly.
const ATOMS: [(&str, fn(u64, u64) -> bool); 9] = [
    ("x < y", |x, y| x < y),
    ("y < x", |x, y| y < x),
    ("x = y", |x, y| x == y),
    ("x + x = y", |x, y| x + x == y),
    ("x = y + 3", |x, y| x == y + 3),
    ("x + y = 12", |x, y| x + y == 12),
    ("x = y / 2", |x, y| x == y / 2),
    ("y = x / 4", |x, y| y == x / 4),
    ("x <= y + 2", |x, y| x <= y + 2),
];

/// A random boolean combination of atoms, carried both as formula text and
/// as an executable ground truth.
#[derive(Clone, Debug)]
enum Case {
    Atom(usize),
    Not(Box<Case>),
    And(Box<Case>, Box<Case>),
    Or(Box<Case>, Box<Case>),
    Imp(Box<Case>, Box<Case>),
}

impl Case {
    fn text(&self) -> String {
        match self {
            Case::Atom(i) => ATOMS[*i].0.to_string(),
            Case::Not(a) => format!("~({})", a.text()),
            Case::And(a, b) => format!("({}) & ({})", a.text(), b.text()),
            Case::Or(a, b) => format!("({}) | ({})", a.text(), b.text()),
            Case::Imp(a, b) => format!("({}) => ({})", a.text(), b.text()),
        }
    }

    fn eval(&self, x: u64, y: u64) -> bool {
        match self {
            Case::Atom(i) => ATOMS[*i].1(x, y),
            Case::Not(a) => !a.eval(x, y),
            Case::And(a, b) => a.eval(x, y) && b.eval(x, y),
            Case::Or(a, b) => a.eval(x, y) || b.eval(x, y),
            Case::Imp(a, b) => !a.eval(x, y) || b.eval(x, y),
        }
    }
}

fn case_strategy() -> impl Strategy<Value = Case> {
    let atom = (0..ATOMS.len()).prop_map(Case::Atom);
    atom.prop_recursive(2, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Case::Not(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Case::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Case::Or(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Case::Imp(Box::new(a), Box::new(b))),
        ]
    })
}

fn compile_xy(text: &str) -> CompiledFormula {
    compile_text(text, &Registry::new()).expect(text)
}

fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(default_registry)
}

/// Two compiled formulas over the same variables agree everywhere we look.
/// Samples wider than the variable list are truncated, so the same pairs
/// serve one- and two-variable formulas.
fn same_language(a: &CompiledFormula, b: &CompiledFormula, pairs: &[(u64, u64)]) {
    assert_eq!(a.vars, b.vars);
    // Every compiled result is the minimal complete automaton of its
    // saturated language, which is unique, so sizes must match exactly.
    assert_eq!(a.dfa.states(), b.dfa.states());
    for &(x, y) in pairs {
        let vals = [x, y];
        let w = align_values(&vals[..a.vars.len()]);
        assert_eq!(a.dfa.accepts(&w).unwrap(), b.dfa.accepts(&w).unwrap(), "x={x} y={y}");
    }
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-4i64..5, 1i64..4).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compiled_formulas_match_the_direct_evaluator(
        case in case_strategy(),
        x in 0u64..300,
        y in 0u64..300,
    ) {
        let compiled = compile_xy(&case.text());
        prop_assert_eq!(&compiled.vars, &vec!["x".to_string(), "y".to_string()]);
        let got = compiled.dfa.accepts(&align_values(&[x, y])).unwrap();
        prop_assert_eq!(got, case.eval(x, y), "{}", case.text());
    }

    #[test]
    fn de_morgan_and_implication_laws_hold(
        a in case_strategy(),
        b in case_strategy(),
        x in 0u64..200,
        y in 0u64..200,
    ) {
        let ta = a.text();
        let tb = b.text();
        let pairs = [(x, y), (y, x), (x, x), (0, 0), (12, 3)];
        let and = compile_xy(&format!("({ta}) & ({tb})"));
        let dual = compile_xy(&format!("~((~({ta})) | (~({tb})))"));
        same_language(&and, &dual, &pairs);
        let imp = compile_xy(&format!("({ta}) => ({tb})"));
        let or = compile_xy(&format!("(~({ta})) | ({tb})"));
        same_language(&imp, &or, &pairs);
    }

    #[test]
    fn quantifiers_match_bounded_search_and_are_dual(
        case in case_strategy(),
        y in 0u64..200,
    ) {
        let t = case.text();
        let exists = compile_xy(&format!("E x ({t})"));
        let forall = compile_xy(&format!("A x ({t})"));
        prop_assert_eq!(&exists.vars, &vec!["y".to_string()]);
        // Atom truth is constant in x beyond 4y + 17, so this bound decides.
        let witness_bound = 4 * y + 17;
        let brute_exists = (0..=witness_bound).any(|x| case.eval(x, y));
        let brute_forall = (0..=witness_bound).all(|x| case.eval(x, y));
        let w = align_values(&[y]);
        prop_assert_eq!(exists.dfa.accepts(&w).unwrap(), brute_exists);
        prop_assert_eq!(forall.dfa.accepts(&w).unwrap(), brute_forall);
        let dual = compile_xy(&format!("~(A x (~({t})))"));
        same_language(&exists, &dual, &[(y, y), (y + 1, 0), (3, 12)]);
    }

    #[test]
    fn leading_zeros_never_change_acceptance(
        case in case_strategy(),
        x in 0u64..500,
        y in 0u64..500,
        pad in 1usize..4,
    ) {
        let compiled = compile_xy(&case.text());
        let w = align_values(&[x, y]);
        let padded = w.with_leading_zeros(pad);
        prop_assert_eq!(
            compiled.dfa.accepts(&w).unwrap(),
            compiled.dfa.accepts(&padded).unwrap()
        );
    }

    #[test]
    fn counting_representations_count(
        case in case_strategy(),
        y in 0u64..200,
    ) {
        let compiled = compile_xy(&case.text());
        let kept = compiled.vars.iter().position(|v| v == "y").unwrap();
        let rep = count_rep(&compiled.dfa, kept).unwrap();
        // A word of length L counts the x below 2^L, by definition.
        let bits = 64 - y.leading_zeros().min(63);
        let brute = (0..(1u64 << bits)).filter(|&x| case.eval(x, y)).count();
        prop_assert_eq!(rep.evaluate_u64(y), Rational::from_integer(BigInt::from(brute)));
        let word: Vec<u16> = encode_u64(y).letters().to_vec();
        let mut padded = vec![0u16; 2];
        padded.extend_from_slice(&word);
        // Minimization preserves the value of every word, padded or not.
        let minimized = rep.minimized();
        prop_assert!(minimized.rank() <= rep.rank());
        prop_assert_eq!(minimized.evaluate_u64(y), rep.evaluate_u64(y));
        prop_assert_eq!(minimized.evaluate_word(&padded), rep.evaluate_word(&padded));
    }

    #[test]
    fn dfa_minimization_preserves_the_language(
        states in 1usize..6,
        tracks in 1usize..3,
        seed in any::<u64>(),
    ) {
        // Splitmix-style generator keeps the table derivation compact.
        let mut z = seed;
        let mut next_u64 = move || {
            z = z.wrapping_add(0x9e3779b97f4a7c15);
            let mut v = z;
            v = (v ^ (v >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            v = (v ^ (v >> 27)).wrapping_mul(0x94d049bb133111eb);
            v ^ (v >> 31)
        };
        let accepting: Vec<bool> = (0..states).map(|_| next_u64() & 1 == 1).collect();
        let next: Vec<u32> =
            (0..states << tracks).map(|_| (next_u64() as usize % states) as u32).collect();
        let dfa = Dfa::new(tracks, 0, accepting, next);
        let minimized = dfa.minimized();
        prop_assert!(minimized.states() <= dfa.states());
        prop_assert_eq!(minimized.minimized().states(), minimized.states());
        for _ in 0..40 {
            let len = (next_u64() % 9) as usize;
            let letters: Vec<u16> =
                (0..len).map(|_| (next_u64() % (1 << tracks)) as u16).collect();
            let w = Word::new(tracks, letters);
            prop_assert_eq!(dfa.accepts(&w).unwrap(), minimized.accepts(&w).unwrap());
        }
    }

    #[test]
    fn rep_minimization_preserves_values(
        rank in 1usize..4,
        v in prop::collection::vec(small_rational(), 1..4),
        g0 in prop::collection::vec(small_rational(), 9),
        g1 in prop::collection::vec(small_rational(), 9),
        w in prop::collection::vec(small_rational(), 1..4),
        word in prop::collection::vec(0u16..2, 0..7),
    ) {
        let take = |src: &[Rational], n: usize| -> Vec<Rational> {
            (0..n).map(|i| src[i % src.len()].clone()).collect()
        };
        let matrix = |src: &[Rational]| -> Vec<Vec<Rational>> {
            (0..rank).map(|i| (0..rank).map(|j| src[(i * rank + j) % src.len()].clone()).collect()).collect()
        };
        let rep = LinRep::from_dense(take(&v, rank), matrix(&g0), matrix(&g1), take(&w, rank));
        let minimized = rep.minimized();
        prop_assert!(minimized.rank() <= rep.rank());
        prop_assert_eq!(minimized.evaluate_word(&word), rep.evaluate_word(&word));
        prop_assert_eq!(minimized.minimized().rank(), minimized.rank());
    }

    #[test]
    fn membership_agrees_three_ways(n in any::<u64>()) {
        let reg = registry();
        let ff = reg.dfao("FF").unwrap();
        prop_assert_eq!(ff.value_u64(n) == 1, oracle::member_f(n));
        let f = ff.value_predicate(1);
        prop_assert_eq!(f.accepts(&align_values(&[n])).unwrap(), oracle::member_f(n));
    }

    #[test]
    fn encoding_round_trips(n in any::<u64>()) {
        let w = encode_u64(n);
        prop_assert_eq!(decode(&w), BigUint::from(n));
        // Canonical encodings have no leading zero (except for zero itself).
        if n > 0 {
            prop_assert_eq!(w.digit(0, 0), 1);
        } else {
            prop_assert_eq!(w.len(), 1);
        }
        prop_assert_eq!(decode(&w.with_leading_zeros(3)), BigUint::from(n));
    }

    #[test]
    fn oracle_values_stay_in_range(n in 0usize..10_000) {
        static TABLE: OnceLock<Vec<i64>> = OnceLock::new();
        let f = TABLE.get_or_init(|| oracle::oracle_f(10_000));
        prop_assert!(f[n] >= -18);
        prop_assert!(dombi_core::verify::EXPECTED_RANGE.contains(&f[n]));
    }
}

/// On the session predicate the witnesses are bounded by the sum constraint,
/// so the count is genuinely a function of the value: leading zeros on the
/// argument change nothing, and the count matches the quadratic oracle.
#[test]
fn session_counts_are_length_invariant_and_match_the_oracle() {
    let g = registry().predicate("g").unwrap();
    assert_eq!(g.params, ["i", "j", "k", "n"]);
    let rep = count_rep(&g.dfa, 3).unwrap();
    let table = oracle::oracle_r3(300);
    for n in 0..300u64 {
        let word: Vec<u16> = encode_u64(n).letters().to_vec();
        let mut padded = vec![0u16; 3];
        padded.extend_from_slice(&word);
        let counted = rep.evaluate_word(&word);
        assert_eq!(counted, Rational::from_integer(BigInt::from(table.r3[n as usize])), "n={n}");
        assert_eq!(rep.evaluate_word(&padded), counted, "n={n}");
    }
}
