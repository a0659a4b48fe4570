//! Base-2, most-significant-digit-first numeration over tuple alphabets.
//!
//! A `Word` is a sequence of letters over the alphabet `{0,1}^k`: each letter
//! carries one binary digit per track. Numbers are written most significant
//! digit first; leading zeros are permitted and carry no value, so every
//! natural number has infinitely many representations and exactly one
//! canonical one (no leading zero, and the single digit `0` for zero).

use num_bigint::BigUint;
use num_traits::Zero;

/// Largest supported track count. Letters are stored as `u16` bit tuples.
pub const MAX_TRACKS: usize = 12;

/// A finite word over the tuple alphabet `{0,1}^tracks`.
///
/// Letter layout: track `t` occupies bit `tracks - 1 - t` of the letter, so
/// the binary rendering of a letter lists track digits in track order and
/// numeric letter order coincides with lexicographic tuple order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    tracks: usize,
    letters: Vec<u16>,
}

impl Word {
    /// Builds a word from raw letters; every letter must fit in `tracks` bits.
    pub fn new(tracks: usize, letters: Vec<u16>) -> Self {
        assert!(tracks >= 1 && tracks <= MAX_TRACKS, "track count {tracks} out of range");
        let limit = 1u32 << tracks;
        assert!(
            letters.iter().all(|&l| (l as u32) < limit),
            "letter out of range for {tracks} tracks"
        );
        Word { tracks, letters }
    }

    /// Builds a single-track word from binary digits.
    pub fn single_track(bits: &[u8]) -> Self {
        Word::new(1, bits.iter().map(|&b| u16::from(b != 0)).collect())
    }

    /// Parses a single-track word from a string of `0`/`1` characters.
    pub fn parse_bits(s: &str) -> Option<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(0u8),
                '1' => bits.push(1u8),
                _ => return None,
            }
        }
        Some(Word::single_track(&bits))
    }

    pub fn tracks(&self) -> usize {
        self.tracks
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u16] {
        &self.letters
    }

    /// The digit of track `t` in position `pos`.
    pub fn digit(&self, pos: usize, t: usize) -> u8 {
        debug_assert!(t < self.tracks);
        ((self.letters[pos] >> (self.tracks - 1 - t)) & 1) as u8
    }

    /// The same word with `j` all-zero letters prepended.
    pub fn with_leading_zeros(&self, j: usize) -> Self {
        let mut letters = vec![0u16; j];
        letters.extend_from_slice(&self.letters);
        Word { tracks: self.tracks, letters }
    }

    /// Renders the word as digit tuples, one `0`/`1` run per letter.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for &l in &self.letters {
            if self.tracks == 1 {
                out.push(if l == 0 { '0' } else { '1' });
            } else {
                out.push('(');
                for t in 0..self.tracks {
                    out.push(if (l >> (self.tracks - 1 - t)) & 1 == 1 { '1' } else { '0' });
                }
                out.push(')');
            }
        }
        out
    }
}

/// Canonical encoding of `n`: no leading zero; zero encodes as the word `0`.
pub fn encode_canonical(n: &BigUint) -> Word {
    if n.is_zero() {
        return Word::single_track(&[0]);
    }
    let len = n.bits();
    let bits: Vec<u8> = (0..len).rev().map(|i| u8::from(n.bit(i))).collect();
    Word::single_track(&bits)
}

/// Canonical encoding of a machine-sized natural.
pub fn encode_u64(n: u64) -> Word {
    encode_canonical(&BigUint::from(n))
}

/// Value of a single-track word; the empty word decodes to zero.
pub fn decode(w: &Word) -> BigUint {
    assert_eq!(w.tracks(), 1, "decode expects a single-track word");
    let mut n = BigUint::zero();
    for &l in w.letters() {
        n <<= 1u32;
        if l != 0 {
            n += 1u32;
        }
    }
    n
}

/// Zero-pads single-track words on the left to a common length and interleaves
/// them into one word with `ws.len()` tracks, in argument order.
pub fn align(ws: &[Word]) -> Word {
    assert!(!ws.is_empty(), "align expects at least one word");
    assert!(ws.len() <= MAX_TRACKS, "align supports at most {MAX_TRACKS} tracks");
    assert!(ws.iter().all(|w| w.tracks() == 1), "align expects single-track words");
    let tracks = ws.len();
    let len = ws.iter().map(Word::len).max().unwrap();
    let mut letters = Vec::with_capacity(len);
    for pos in 0..len {
        let mut letter = 0u16;
        for (t, w) in ws.iter().enumerate() {
            let pad = len - w.len();
            let bit = if pos < pad { 0 } else { w.digit(pos - pad, 0) };
            letter |= (bit as u16) << (tracks - 1 - t);
        }
        letters.push(letter);
    }
    Word::new(tracks, letters)
}

/// Aligns the canonical encodings of machine-sized naturals.
pub fn align_values(values: &[u64]) -> Word {
    let ws: Vec<Word> = values.iter().map(|&v| encode_u64(v)).collect();
    align(&ws)
}
