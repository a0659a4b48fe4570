//! End-to-end verification: every quantitative claim in the development is
//! measured against the pipeline, the reference fixture, and the
//! brute-force oracle, and collected into one report.
//!
//! Hard milestones are basis-independent quantities or value-level facts;
//! state/rank counts that depend on the completeness convention are soft.
//! The verdict passes iff every hard milestone passes.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::fixture;
use crate::linrep::{LinRep, Rational};
use crate::oracle;
use crate::orbit::{orbit_dfao, output_range};
use crate::pipeline::{Pipeline, PipelineError, DEFAULT_BOUND, REP_NAMES};

#[derive(Clone, Debug)]
pub struct VerifyLimits {
    /// Oracle/representation/automaton agreement checked on [0, agreement).
    pub agreement: usize,
    /// Density checkpoints for 1 ≤ k ≤ density_depth.
    pub density_depth: u32,
    /// Cap on orbit exploration.
    pub orbit_bound: usize,
}

impl Default for VerifyLimits {
    fn default() -> Self {
        VerifyLimits { agreement: 10_000, density_depth: 10, orbit_bound: DEFAULT_BOUND }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Milestone {
    pub name: String,
    pub expected: String,
    pub measured: String,
    pub hard: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub milestones: Vec<Milestone>,
    pub verdict: String,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text mirror of the JSON: the same fields in the same order,
    /// nothing added.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for m in &self.milestones {
            out.push_str(&format!(
                "[{}] {} {}\n    expected: {}\n    measured: {}\n",
                if m.pass { "PASS" } else { "FAIL" },
                if m.hard { "hard" } else { "soft" },
                m.name,
                m.expected,
                m.measured,
            ));
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out
    }
}

fn milestone(
    name: &str,
    expected: impl Into<String>,
    measured: impl Into<String>,
    hard: bool,
    pass: bool,
) -> Milestone {
    Milestone { name: name.to_string(), expected: expected.into(), measured: measured.into(), hard, pass }
}

/// The 28 values the difference function attains.
pub const EXPECTED_RANGE: [i64; 28] = [
    -18, -15, -14, -12, -11, -10, -9, -8, -7, -6, -5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 6, 7, 8,
    9, 12, 13, 18,
];

fn render_set(set: &BTreeSet<i64>) -> String {
    let items: Vec<String> = set.iter().map(|x| x.to_string()).collect();
    format!("{{{}}} ({} values)", items.join(", "), set.len())
}

/// Representation values at the canonical encodings of 0..limit, sharing
/// digit work along the prefix tree of encodings. Much faster than
/// evaluating each argument separately when limit is large.
pub fn rep_values(rep: &LinRep, limit: usize) -> Vec<Rational> {
    let mut values = vec![Rational::zero(); limit];
    if limit == 0 {
        return values;
    }
    values[0] = rep.evaluate_u64(0);
    if limit == 1 {
        return values;
    }
    let mut queue: VecDeque<(usize, Vec<Rational>)> = VecDeque::new();
    let root = rep.step(rep.v_vec(), 1);
    values[1] = rep.output(&root);
    queue.push_back((1, root));
    while let Some((n, u)) = queue.pop_front() {
        for d in 0..2 {
            let child = 2 * n + d;
            if child < limit {
                let uc = rep.step(&u, d);
                values[child] = rep.output(&uc);
                queue.push_back((child, uc));
            }
        }
    }
    values
}

fn int(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

fn ratio(n: u64, d: u64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn verify_theorem(p: &Pipeline, limits: &VerifyLimits) -> Result<TheoremReport, PipelineError> {
    let mut ms = Vec::new();

    // (a) The representation predicate automaton.
    let g = p.g_dfa()?;
    let g_total = g.dfa.states();
    let g_trim = g_total - g.dfa.sink().map_or(0, |_| 1);
    ms.push(milestone(
        "g_states",
        "143 excluding the completeness sink",
        format!("{g_total} total, {g_trim} excluding sink"),
        false,
        g_trim == 143,
    ));

    // (b) Raw counting representation ranks.
    let raw = p.raw_reps()?;
    for (i, want) in [143usize, 143, 446, 446].into_iter().enumerate() {
        ms.push(milestone(
            &format!("rank_{}", REP_NAMES[i]),
            want.to_string(),
            raw[i].rank().to_string(),
            false,
            raw[i].rank() == want,
        ));
    }

    // (c) Combined block rank.
    let combined = p.combined_raw()?;
    ms.push(milestone(
        "combined_rank",
        "1178",
        combined.rank().to_string(),
        true,
        combined.rank() == 1178,
    ));

    // (d) Minimal rank.
    let minimized = p.minimized()?;
    ms.push(milestone(
        "minimized_rank",
        "16",
        minimized.rank().to_string(),
        true,
        minimized.rank() == 16,
    ));

    // (e) Orbit cardinality, from the pipeline and from the reference
    // representation; minimal representations of one function have orbits
    // of equal size, so the two syntheses must agree.
    let m = p.orbit(limits.orbit_bound)?;
    let reference = fixture::reference();
    let m_ref = orbit_dfao(&reference, limits.orbit_bound)?;
    ms.push(milestone(
        "orbit_cardinality",
        "260 from the pipeline and from the reference representation",
        format!("{} (pipeline), {} (reference)", m.states(), m_ref.states()),
        true,
        m.states() == 260 && m_ref.states() == 260,
    ));
    ms.push(milestone(
        "orbit_note",
        "n/a (informational)",
        "the recorded cardinality 268 is contradicted by exact closure of the reference \
         matrices themselves: both syntheses yield 260 states with identical outputs and range",
        false,
        true,
    ));

    // (f) Output range and its minimum.
    let range = output_range(&m);
    let range_ref = output_range(&m_ref);
    let expected_range: BTreeSet<i64> = EXPECTED_RANGE.into_iter().collect();
    ms.push(milestone(
        "range_set",
        render_set(&expected_range),
        render_set(&range),
        true,
        range == expected_range && range_ref == expected_range,
    ));
    ms.push(milestone(
        "range_min",
        "-18",
        range.iter().next().map_or("empty".to_string(), |x| x.to_string()),
        true,
        range.iter().next() == Some(&-18),
    ));

    // (g), (h) Base cases, straight from the oracle table.
    let oracle_limit = limits.agreement.max(348);
    let table = oracle::oracle_r3(oracle_limit);
    let min_d = table.d[..87].iter().min().copied().unwrap();
    ms.push(milestone(
        "d_positive_0_87",
        "d(n) > 0 on [0, 87)",
        format!("min d(n) = {min_d}"),
        true,
        min_d > 0,
    ));
    let min_base = (87..348).map(|n| 5 * table.d[n] - n as i64 - 35).min().unwrap();
    ms.push(milestone(
        "base_case_87_348",
        "d(n) > n/5 + 7 on [87, 348), i.e. 5·d(n) − n − 35 > 0",
        format!("min(5·d(n) − n − 35) = {min_base}"),
        true,
        min_base > 0,
    ));

    // (i) Value agreement: oracle vs minimized representation vs automaton,
    // with the unminimized combination spot-checked on a short prefix.
    let n_agree = limits.agreement;
    let by_rep = rep_values(&minimized, n_agree);
    let mut agree = true;
    for n in 0..n_agree {
        let want = table.d[n] - 4 * table.d[n / 4];
        if by_rep[n] != int(want) || m.value_u64(n as u64) != want {
            agree = false;
            break;
        }
    }
    for n in 0..n_agree.min(64) {
        let want = table.d[n] - 4 * table.d[n / 4];
        if combined.evaluate_u64(n as u64) != int(want) {
            agree = false;
            break;
        }
    }
    ms.push(milestone(
        "agreement_f",
        format!("oracle, minimized representation, and M agree on [0, {n_agree})"),
        if agree {
            format!("exact agreement on [0, {n_agree}); raw combination spot-checked on [0, {})", n_agree.min(64))
        } else {
            "disagreement found".to_string()
        },
        true,
        agree,
    ));

    // (j) Induction margin: 4·(⌊n/4⌋/5 + 7) − 18 > n/5 + 7, exactly, on a
    // sample of n ≥ 348. The slack is 3 − (n mod 4)/5, at least 12/5.
    let mut sample: Vec<u64> = (348..2348).collect();
    sample.extend([10_u64.pow(6), 10_u64.pow(6) + 3, 10_u64.pow(9), 10_u64.pow(12), 10_u64.pow(18), u64::MAX]);
    let mut min_margin: Option<(Rational, u64)> = None;
    for &n in &sample {
        let quarter = Rational::from_integer(BigInt::from(n / 4));
        let bound = int(4) * (quarter / int(5) + int(7)) - int(18);
        let target = Rational::new(BigInt::from(n), BigInt::from(5)) + int(7);
        let margin = bound - target;
        if min_margin.as_ref().map_or(true, |(best, _)| margin < *best) {
            min_margin = Some((margin, n));
        }
    }
    let (margin, at) = min_margin.unwrap();
    ms.push(milestone(
        "induction_margin",
        "margin > 0 for all sampled n ≥ 348 (algebraic minimum 12/5 at n ≡ 3 mod 4)",
        format!("min margin {margin} at n = {at} over {} samples", sample.len()),
        true,
        margin > Rational::zero(),
    ));

    // (k) Density checkpoints.
    let report = oracle::density_report(limits.density_depth);
    let ninth = ratio(1, 9);
    let third = ratio(1, 3);
    let lower_ok = report.lower.iter().all(|c| c.density == c.expected && c.density < ninth)
        && report.lower.windows(2).all(|w| w[0].density < w[1].density);
    ms.push(milestone(
        "density_lower",
        format!(
            "D(3·4^k) = (4^k − 1)/(9·4^k) exactly for k ≤ {}, strictly increasing toward 1/9",
            limits.density_depth
        ),
        if lower_ok { "all checkpoints exact, increasing, below 1/9".to_string() } else { "mismatch".to_string() },
        true,
        lower_ok,
    ));
    let upper_ok = report.upper.iter().all(|c| c.density == c.expected && c.density < third)
        && report.upper.windows(2).all(|w| w[0].density < w[1].density);
    ms.push(milestone(
        "density_upper",
        format!(
            "D(4^k) = (4^k − 1)/(3·4^k) exactly for k ≤ {}, strictly increasing toward 1/3",
            limits.density_depth
        ),
        if upper_ok { "all checkpoints exact, increasing, below 1/3".to_string() } else { "mismatch".to_string() },
        true,
        upper_ok,
    ));
    ms.push(milestone(
        "density_note",
        "n/a (informational)",
        "the source's second displayed density computation is labeled liminf but computes \
         the upper density; implemented as limsup checkpoints",
        false,
        true,
    ));

    let verdict = if ms.iter().filter(|m| m.hard).all(|m| m.pass) { "pass" } else { "fail" };
    Ok(TheoremReport { milestones: ms, verdict: verdict.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Dfa;
    use crate::linrep::count_rep;

    #[test]
    fn shared_prefix_evaluation_matches_direct_evaluation() {
        let below = count_rep(&Dfa::lt(), 1).unwrap();
        let values = rep_values(&below, 300);
        for (n, v) in values.iter().enumerate() {
            assert_eq!(*v, below.evaluate_u64(n as u64), "n={n}");
        }
        assert!(rep_values(&below, 0).is_empty());
        assert_eq!(rep_values(&below, 1), vec![Rational::zero()]);
    }

    #[test]
    fn report_serialization_is_stable() {
        let report = TheoremReport {
            milestones: vec![milestone("demo", "1", "1", true, true)],
            verdict: "pass".to_string(),
        };
        assert_eq!(
            serde_json::to_string(&report).unwrap(),
            r#"{"milestones":[{"name":"demo","expected":"1","measured":"1","hard":true,"pass":true}],"verdict":"pass"}"#
        );
        let text = report.render_text();
        assert!(text.contains("[PASS] hard demo"));
        assert!(text.ends_with("verdict: pass\n"));
        assert!(report.passed());
    }
}
