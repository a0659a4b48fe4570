//! A fixed rank-16 representation of the difference function, recorded from
//! an independent computation. It cross-checks the whole pipeline: equal
//! values everywhere, equal minimal rank, and a matching synthesized orbit.
//!
//! γ(0) scales an integer matrix by 1/276, γ(1) by 1/552; the first eight
//! rows of each route state i to state 2i or 2i+1, so states 0..=7 spell a
//! binary tree over the first three input digits.

use num_bigint::BigInt;

use crate::linrep::{LinRep, Rational};

const SCALE0: i64 = 276;
const SCALE1: i64 = 552;

#[rustfmt::skip]
const M0: [[i64; 16]; 16] = [
    [276, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 276, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 276, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 276, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 276, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 276, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 276, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 276, 0],
    [0, 0, 0, -616, -348, 344, 156, -202, 156, 414, 208, -680, -8, 692, -572, -634],
    [0, 0, 0, 244, -36, -288, -566, 405, -566, 161, 12, 1408, -280, -252, 542, 971],
    [0, 0, 0, 276, 552, 92, 46, 23, 46, -253, -368, 92, 276, -460, 138, 253],
    [0, 0, 0, -380, -324, 168, 334, -219, 334, 161, 384, -668, 56, 492, -274, -553],
    [0, 0, 0, 448, 504, 168, 472, 126, 196, -322, -168, -392, 56, -336, 140, -70],
    [0, 0, 0, -344, -180, 216, 712, -252, 712, 92, 60, -1148, 164, 396, -556, -964],
    [0, 0, 0, -132, -252, -84, -6, 75, -6, 207, 84, 12, -120, 168, -162, -195],
    [0, 0, 0, 364, 444, 56, -226, 203, -226, -161, -332, 360, 80, -388, 62, 429],
];

#[rustfmt::skip]
const M1: [[i64; 16]; 16] = [
    [0, 552, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 552, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 552, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 552, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 552, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 552, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 552, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 552],
    [0, 0, 0, -104, -600, -16, -724, 218, -724, 322, 568, 1632, -496, 32, 692, 942],
    [0, 0, 0, -444, -396, 420, 306, -99, 306, 345, 408, -1164, 48, 816, -294, -957],
    [0, 0, 0, -300, 180, 612, 714, -231, 714, 69, -336, -1428, 480, 432, -870, -945],
    [0, 0, 0, 616, 72, -528, -1076, 846, -1076, 230, -24, 2704, -544, -600, 1124, 1922],
    [0, 0, 0, 324, 468, 156, 642, 393, 642, -483, 120, -732, 144, -312, -54, -249],
    [0, 0, 0, 376, 216, -480, -284, 606, -284, 230, -72, 1120, -160, -696, 428, 890],
    [0, 0, 0, 772, 420, -596, -726, 565, -726, -207, -232, 1820, -352, -1016, 914, 1291],
    [0, 0, 0, -980, -516, 748, 1302, -1049, 1302, -69, 632, -2788, 464, 1264, -1186, -2351],
];

const W: [i64; 16] = [-3, -2, -1, -3, -6, -5, -1, -3, -6, -6, -3, -3, 3, 1, -1, 3];

fn scaled(m: &[[i64; 16]; 16], scale: i64) -> Vec<Vec<Rational>> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|&x| Rational::new(BigInt::from(x), BigInt::from(scale)))
                .collect()
        })
        .collect()
}

/// The reference representation: v = e₀, γ(0) = M0/276, γ(1) = M1/552.
pub fn reference() -> LinRep {
    let mut v = vec![Rational::from_integer(BigInt::from(0)); 16];
    v[0] = Rational::from_integer(BigInt::from(1));
    let w = W.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
    LinRep::from_dense(v, scaled(&M0, SCALE0), scaled(&M1, SCALE1), w)
}
