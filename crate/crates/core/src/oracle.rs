//! Brute-force ground truth, independent of every automaton in the crate:
//! plain bit tests, integer convolutions, and exact density bookkeeping.
//!
//! F is the set of naturals whose canonical base-2 expansion has even length
//! and begins 11 — equivalently the union of the blocks [3·4^k, 4^{k+1}).
//! A = ℕ∖F, and r3(n) counts ordered triples of elements of A summing to n.

use num_bigint::BigInt;

use crate::linrep::Rational;

/// Direct arithmetic membership test for F.
pub fn member_f(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let bits = 64 - n.leading_zeros();
    bits % 2 == 0 && n >> (bits - 2) == 0b11
}

/// Characteristic bits of F on [0, n).
pub fn characteristic_prefix(n: u64) -> Vec<bool> {
    (0..n).map(member_f).collect()
}

pub struct RepCountTable {
    pub limit: usize,
    pub r3: Vec<u64>,
    /// First differences, with d(0) = r3(0) (r3 of −1 taken as 0).
    pub d: Vec<i64>,
}

/// r3 and its difference table on [0, limit), by two truncated
/// self-convolutions of A's characteristic array. O(limit²).
pub fn oracle_r3(limit: usize) -> RepCountTable {
    let in_a: Vec<bool> = (0..limit as u64).map(|n| !member_f(n)).collect();
    let mut r2 = vec![0u64; limit];
    for i in 0..limit {
        if !in_a[i] {
            continue;
        }
        for j in i..limit {
            if in_a[j - i] {
                r2[j] += 1;
            }
        }
    }
    let mut r3 = vec![0u64; limit];
    for i in 0..limit {
        if !in_a[i] {
            continue;
        }
        for j in i..limit {
            r3[j] += r2[j - i];
        }
    }
    let d = (0..limit)
        .map(|n| if n == 0 { r3[0] as i64 } else { r3[n] as i64 - r3[n - 1] as i64 })
        .collect();
    RepCountTable { limit, r3, d }
}

/// f(n) = d(n) − 4·d(⌊n/4⌋) on [0, limit).
pub fn oracle_f(limit: usize) -> Vec<i64> {
    assert!(limit >= 1);
    let table = oracle_r3(limit);
    (0..limit).map(|n| table.d[n] - 4 * table.d[n / 4]).collect()
}

#[derive(Clone, Debug)]
pub struct DensityCheckpoint {
    pub n: u64,
    /// |F ∩ [0, n)| by direct enumeration.
    pub count: u64,
    /// count/n, exactly.
    pub density: Rational,
    /// The closed form the density must equal at this checkpoint.
    pub expected: Rational,
}

#[derive(Clone, Debug)]
pub struct DensityReport {
    pub depth: u32,
    /// Checkpoints n = 3·4^k (k = 1..=depth), where the running density is
    /// locally least: (4^k − 1)/(9·4^k), increasing toward 1/9.
    pub lower: Vec<DensityCheckpoint>,
    /// Checkpoints n = 4^k, where it is locally greatest:
    /// (4^k − 1)/(3·4^k), increasing toward 1/3.
    pub upper: Vec<DensityCheckpoint>,
}

fn rational(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact density checkpoints for F up to 3·4^depth, counted directly.
pub fn density_report(depth: u32) -> DensityReport {
    assert!(depth >= 1);
    assert!(depth <= 13, "checkpoint tables beyond 3·4^13 are not desk-scale");
    let top = 3 * 4u64.pow(depth);
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut count = 0u64;
    for n in 0..=top {
        for k in 1..=depth {
            let p = 4u64.pow(k);
            if n == p {
                upper.push(DensityCheckpoint {
                    n,
                    count,
                    density: rational(count, n),
                    expected: rational(p - 1, 3 * p),
                });
            }
            if n == 3 * p {
                lower.push(DensityCheckpoint {
                    n,
                    count,
                    density: rational(count, n),
                    expected: rational(p - 1, 9 * p),
                });
            }
        }
        if n < top && member_f(n) {
            count += 1;
        }
    }
    DensityReport { depth, lower, upper }
}
