//! Built-in relation automata: equality, strict order, addition, constants.
//!
//! All constructors return complete, leading-zero-invariant, canonically
//! minimized automata.

use num_bigint::BigUint;

use super::{Dfa, Nfa};
use crate::numeration::encode_canonical;

impl Dfa {
    /// Accepts every word over `tracks` tracks.
    pub fn universal(tracks: usize) -> Dfa {
        Dfa::new(tracks, 0, vec![true], vec![0; 1 << tracks])
    }

    /// Rejects every word over `tracks` tracks.
    pub fn empty_language(tracks: usize) -> Dfa {
        Dfa::new(tracks, 0, vec![false], vec![0; 1 << tracks])
    }

    /// Two tracks `(x, y)`: accepts iff `x = y`.
    pub fn eq() -> Dfa {
        // state 0: digits agree so far (accepting); state 1: dead.
        let next = vec![
            0, 1, 1, 0, // state 0 on 00, 01, 10, 11
            1, 1, 1, 1, // dead
        ];
        Dfa::new(2, 0, vec![true, false], next)
    }

    /// Two tracks `(x, y)`: accepts iff `x < y`.
    pub fn lt() -> Dfa {
        // state 0: equal so far; state 1: x < y decided; state 2: x > y decided.
        let next = vec![
            0, 1, 2, 0, // state 0 on 00, 01, 10, 11
            1, 1, 1, 1, // less, absorbing (accepting)
            2, 2, 2, 2, // greater, absorbing (dead)
        ];
        Dfa::new(2, 0, vec![false, true, false], next)
    }

    /// Three tracks `(x, y, z)`: accepts iff `x + y = z`.
    ///
    /// Built least-significant-digit-first as a two-state carry automaton,
    /// then reversed, determinized, saturated, and minimized into
    /// most-significant-first form.
    pub fn add() -> Dfa {
        let dead = 2u32;
        let mut next = Vec::with_capacity(3 * 8);
        for carry in 0..2u32 {
            for letter in 0..8usize {
                let x = (letter >> 2) & 1;
                let y = (letter >> 1) & 1;
                let z = letter & 1;
                let total = x as u32 + y as u32 + carry;
                next.push(if total & 1 == z as u32 { total >> 1 } else { dead });
            }
        }
        next.extend_from_slice(&[dead; 8]);
        let lsd = Dfa::new(3, 0, vec![true, false, false], next);
        lsd.reversed().determinize().zero_saturate().minimized()
    }

    /// One track: accepts exactly the representations of `c` (its canonical
    /// encoding with any number of leading zeros; for zero, all-zero words
    /// including the empty word).
    pub fn constant(c: BigUint) -> Dfa {
        use num_traits::Zero;
        let digits = encode_canonical(&c);
        let m = digits.len();
        let mut nfa = Nfa::empty(1, m + 1);
        nfa.initials.push(0);
        nfa.accepting[m] = true;
        if c.is_zero() {
            nfa.accepting[0] = true;
        }
        // Leading zeros stay on the start state; the digit chain branches off
        // nondeterministically. Missing transitions fall to the dead subset.
        nfa.add_transition(0, 0, 0);
        for (i, &d) in digits.letters().iter().enumerate() {
            nfa.add_transition(i, d, (i + 1) as u32);
        }
        nfa.determinize().minimized()
    }
}
