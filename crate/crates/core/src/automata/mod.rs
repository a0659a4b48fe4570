//! Complete deterministic automata over tuple alphabets `{0,1}^k`.
//!
//! Every `Dfa` is total: each state has a transition for all `2^k` letters,
//! and dead (sink) states are kept rather than elided. All language
//! operations preserve totality. Minimization renumbers states in
//! breadth-first order from the initial state, so two automata with the same
//! language minimize to byte-identical encodings.

mod builtins;
pub(crate) mod text;

use std::collections::{HashMap, VecDeque};

use crate::numeration::{Word, MAX_TRACKS};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AutomataError {
    #[error("track count mismatch: {0} vs {1}")]
    TrackMismatch(usize, usize),
    #[error("track index {index} out of range for {tracks} tracks")]
    InvalidTrack { index: usize, tracks: usize },
    #[error("projection requires at least two tracks")]
    ProjectionArity,
    #[error("automaton text parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Boolean connective applied to acceptance in a product construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    Implies,
    Xor,
}

impl BoolOp {
    pub(crate) fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::Implies => !a || b,
            BoolOp::Xor => a != b,
        }
    }
}

/// A complete DFA over the alphabet `{0,1}^tracks`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    tracks: usize,
    initial: usize,
    accepting: Vec<bool>,
    /// Flat transition table, indexed by `state * 2^tracks + letter`.
    next: Vec<u32>,
}

impl Dfa {
    pub fn new(tracks: usize, initial: usize, accepting: Vec<bool>, next: Vec<u32>) -> Self {
        assert!(tracks >= 1 && tracks <= MAX_TRACKS, "track count {tracks} out of range");
        let states = accepting.len();
        assert!(initial < states, "initial state out of range");
        assert_eq!(next.len(), states << tracks, "transition table size mismatch");
        assert!(
            next.iter().all(|&t| (t as usize) < states),
            "transition target out of range"
        );
        Dfa { tracks, initial, accepting, next }
    }

    pub fn tracks(&self) -> usize {
        self.tracks
    }

    pub fn states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn alphabet(&self) -> usize {
        1 << self.tracks
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.accepting[s]
    }

    pub fn next(&self, s: usize, letter: u16) -> usize {
        self.next[(s << self.tracks) + letter as usize] as usize
    }

    /// Runs the automaton on `w` and returns the final state.
    pub fn run(&self, w: &Word) -> Result<usize, AutomataError> {
        if w.tracks() != self.tracks {
            return Err(AutomataError::TrackMismatch(self.tracks, w.tracks()));
        }
        let mut s = self.initial;
        for &l in w.letters() {
            s = self.next(s, l);
        }
        Ok(s)
    }

    pub fn accepts(&self, w: &Word) -> Result<bool, AutomataError> {
        Ok(self.accepting[self.run(w)?])
    }

    /// Same automaton with a different initial state.
    pub fn with_initial(&self, initial: usize) -> Self {
        assert!(initial < self.states());
        let mut d = self.clone();
        d.initial = initial;
        d
    }

    /// Complement; totality makes this a flip of the accepting set.
    pub fn complement(&self) -> Self {
        let mut d = self.clone();
        for a in &mut d.accepting {
            *a = !*a;
        }
        d
    }

    /// Synchronous product combining acceptance with `op`.
    pub fn product(&self, other: &Dfa, op: BoolOp) -> Result<Dfa, AutomataError> {
        if self.tracks != other.tracks {
            return Err(AutomataError::TrackMismatch(self.tracks, other.tracks));
        }
        let alphabet = self.alphabet();
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        let mut next: Vec<u32> = Vec::new();
        let start = (self.initial as u32, other.initial as u32);
        ids.insert(start, 0);
        pairs.push(start);
        let mut head = 0;
        while head < pairs.len() {
            let (a, b) = pairs[head];
            for letter in 0..alphabet {
                let ta = self.next(a as usize, letter as u16) as u32;
                let tb = other.next(b as usize, letter as u16) as u32;
                let id = *ids.entry((ta, tb)).or_insert_with(|| {
                    pairs.push((ta, tb));
                    (pairs.len() - 1) as u32
                });
                next.push(id);
            }
            head += 1;
        }
        let accepting = pairs
            .iter()
            .map(|&(a, b)| op.apply(self.accepting[a as usize], other.accepting[b as usize]))
            .collect();
        Ok(Dfa::new(self.tracks, 0, accepting, next))
    }

    /// Existentially projects away one track: erases it, determinizes the
    /// resulting NFA, closes under removal of leading all-zero letters, and
    /// minimizes.
    pub fn project_exists(&self, track: usize) -> Result<Dfa, AutomataError> {
        if self.tracks < 2 {
            return Err(AutomataError::ProjectionArity);
        }
        if track >= self.tracks {
            return Err(AutomataError::InvalidTrack { index: track, tracks: self.tracks });
        }
        let new_tracks = self.tracks - 1;
        let alphabet = self.alphabet();
        let erased_bit = self.tracks - 1 - track;
        let mut nfa = Nfa::empty(new_tracks, self.states());
        nfa.initials.push(self.initial as u32);
        for s in 0..self.states() {
            nfa.accepting[s] = self.accepting[s];
            for letter in 0..alphabet {
                let low = letter & ((1 << erased_bit) - 1);
                let high = (letter >> (erased_bit + 1)) << erased_bit;
                let new_letter = high | low;
                nfa.add_transition(s, new_letter as u16, self.next(s, letter as u16) as u32);
            }
        }
        Ok(nfa.determinize().zero_saturate().minimized())
    }

    /// States reachable from the initial state by all-zero letters.
    fn zero_chain(&self) -> Vec<u32> {
        let mut seen = vec![false; self.states()];
        let mut chain = Vec::new();
        let mut s = self.initial;
        while !seen[s] {
            seen[s] = true;
            chain.push(s as u32);
            s = self.next(s, 0);
        }
        chain
    }

    /// Closes the language under removal of leading all-zero letters:
    /// the result accepts `w` iff this automaton accepts `0^j w` for some
    /// `j >= 0`.
    pub fn zero_saturate(&self) -> Dfa {
        let mut nfa = Nfa::empty(self.tracks, self.states());
        nfa.initials = self.zero_chain();
        for s in 0..self.states() {
            nfa.accepting[s] = self.accepting[s];
            for letter in 0..self.alphabet() {
                nfa.add_transition(s, letter as u16, self.next(s, letter as u16) as u32);
            }
        }
        nfa.determinize()
    }

    /// True iff acceptance is invariant under adding or removing leading
    /// all-zero letters (the empty word patterning with the all-zero letter).
    pub fn is_leading_zero_invariant(&self) -> bool {
        let shifted = self.with_initial(self.next(self.initial, 0));
        self.equivalent(&shifted).expect("same alphabet")
    }

    /// Language equality via reachable product states.
    pub fn equivalent(&self, other: &Dfa) -> Result<bool, AutomataError> {
        if self.tracks != other.tracks {
            return Err(AutomataError::TrackMismatch(self.tracks, other.tracks));
        }
        let alphabet = self.alphabet();
        let mut seen: HashMap<(u32, u32), ()> = HashMap::new();
        let mut queue = VecDeque::new();
        let start = (self.initial as u32, other.initial as u32);
        seen.insert(start, ());
        queue.push_back(start);
        while let Some((a, b)) = queue.pop_front() {
            if self.accepting[a as usize] != other.accepting[b as usize] {
                return Ok(false);
            }
            for letter in 0..alphabet {
                let t = (
                    self.next(a as usize, letter as u16) as u32,
                    other.next(b as usize, letter as u16) as u32,
                );
                if seen.insert(t, ()).is_none() {
                    queue.push_back(t);
                }
            }
        }
        Ok(true)
    }

    /// True iff no accepting state is reachable.
    pub fn is_empty_language(&self) -> bool {
        let mut seen = vec![false; self.states()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(s) = queue.pop_front() {
            if self.accepting[s] {
                return false;
            }
            for letter in 0..self.alphabet() {
                let t = self.next(s, letter as u16);
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        true
    }

    /// Restricts to states reachable from the initial state, renumbering in
    /// breadth-first discovery order (letters ascending).
    fn trim_reachable(&self) -> Dfa {
        let mut order: Vec<u32> = Vec::new();
        let mut id = vec![u32::MAX; self.states()];
        id[self.initial] = 0;
        order.push(self.initial as u32);
        let mut head = 0;
        while head < order.len() {
            let s = order[head] as usize;
            for letter in 0..self.alphabet() {
                let t = self.next(s, letter as u16);
                if id[t] == u32::MAX {
                    id[t] = order.len() as u32;
                    order.push(t as u32);
                }
            }
            head += 1;
        }
        let mut accepting = Vec::with_capacity(order.len());
        let mut next = Vec::with_capacity(order.len() << self.tracks);
        for &s in &order {
            accepting.push(self.accepting[s as usize]);
            for letter in 0..self.alphabet() {
                next.push(id[self.next(s as usize, letter as u16)]);
            }
        }
        Dfa::new(self.tracks, 0, accepting, next)
    }

    /// Minimal complete DFA for the same language, canonically numbered in
    /// breadth-first order. Unreachable states are removed; a dead state, if
    /// any remains, is kept so the result stays total.
    pub fn minimized(&self) -> Dfa {
        let d = self.trim_reachable();
        let states = d.states();
        let alphabet = d.alphabet();
        // Moore partition refinement with hashed signatures.
        let mut block: Vec<u32> = d.accepting.iter().map(|&a| u32::from(a)).collect();
        let mut blocks = 2;
        loop {
            let mut sig_ids: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut new_block = vec![0u32; states];
            for s in 0..states {
                let mut sig = Vec::with_capacity(alphabet + 1);
                sig.push(block[s]);
                for letter in 0..alphabet {
                    sig.push(block[d.next(s, letter as u16)]);
                }
                let n = sig_ids.len() as u32;
                new_block[s] = *sig_ids.entry(sig).or_insert(n);
            }
            let count = sig_ids.len();
            block = new_block;
            if count == blocks {
                break;
            }
            blocks = count;
        }
        // Quotient, then canonical BFS renumbering.
        let mut rep_next = vec![u32::MAX; blocks << d.tracks];
        let mut rep_acc = vec![false; blocks];
        for s in 0..states {
            let b = block[s] as usize;
            rep_acc[b] = d.accepting[s];
            if rep_next[b << d.tracks] == u32::MAX {
                for letter in 0..alphabet {
                    rep_next[(b << d.tracks) + letter] = block[d.next(s, letter as u16)];
                }
            }
        }
        let quotient = Dfa::new(d.tracks, block[0] as usize, rep_acc, rep_next);
        quotient.trim_reachable()
    }

    /// Extends the automaton to a superset of tracks. `positions[i]` gives the
    /// destination of current track `i` among `new_tracks` tracks (strictly
    /// increasing); digits on the added tracks are unconstrained.
    pub fn spread_tracks(&self, new_tracks: usize, positions: &[usize]) -> Dfa {
        assert_eq!(positions.len(), self.tracks);
        assert!(new_tracks >= self.tracks && new_tracks <= MAX_TRACKS);
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
        assert!(positions.iter().all(|&p| p < new_tracks));
        let new_alphabet = 1usize << new_tracks;
        let mut table = vec![0u16; new_alphabet];
        for (nl, entry) in table.iter_mut().enumerate() {
            let mut old_letter = 0u16;
            for (i, &p) in positions.iter().enumerate() {
                let bit = (nl >> (new_tracks - 1 - p)) & 1;
                old_letter |= (bit as u16) << (self.tracks - 1 - i);
            }
            *entry = old_letter;
        }
        let mut next = Vec::with_capacity(self.states() << new_tracks);
        for s in 0..self.states() {
            for &old_letter in table.iter() {
                next.push(self.next[(s << self.tracks) + old_letter as usize]);
            }
        }
        Dfa::new(new_tracks, self.initial, self.accepting.clone(), next)
    }

    /// Reorders tracks; `dest[i]` is the new position of current track `i`.
    pub fn permute_tracks(&self, dest: &[usize]) -> Dfa {
        assert_eq!(dest.len(), self.tracks);
        let mut seen = vec![false; self.tracks];
        for &d in dest {
            assert!(d < self.tracks && !seen[d], "dest must be a permutation");
            seen[d] = true;
        }
        let alphabet = self.alphabet();
        let mut table = vec![0u16; alphabet];
        for (nl, entry) in table.iter_mut().enumerate() {
            let mut old_letter = 0u16;
            for (i, &d) in dest.iter().enumerate() {
                let bit = (nl >> (self.tracks - 1 - d)) & 1;
                old_letter |= (bit as u16) << (self.tracks - 1 - i);
            }
            *entry = old_letter;
        }
        let mut next = Vec::with_capacity(self.next.len());
        for s in 0..self.states() {
            for &old_letter in table.iter() {
                next.push(self.next[(s << self.tracks) + old_letter as usize]);
            }
        }
        Dfa::new(self.tracks, self.initial, self.accepting.clone(), next)
    }

    /// Index of the dead state (non-accepting, all transitions to itself), if
    /// one exists. A minimal automaton has at most one.
    pub fn sink(&self) -> Option<usize> {
        (0..self.states()).find(|&s| {
            !self.accepting[s] && (0..self.alphabet()).all(|l| self.next(s, l as u16) == s)
        })
    }

    /// Reverses the language: arrows flipped, accepting states become
    /// initials and the old initial becomes the accepting state.
    pub fn reversed(&self) -> Nfa {
        let mut nfa = Nfa::empty(self.tracks, self.states());
        for s in 0..self.states() {
            if self.accepting[s] {
                nfa.initials.push(s as u32);
            }
            for letter in 0..self.alphabet() {
                let t = self.next(s, letter as u16);
                nfa.add_transition(t, letter as u16, s as u32);
            }
        }
        nfa.accepting[self.initial] = true;
        nfa
    }
}

/// A nondeterministic automaton over `{0,1}^tracks`, used as an intermediate
/// for projection, reversal, and zero-saturation.
#[derive(Clone, Debug)]
pub struct Nfa {
    tracks: usize,
    initials: Vec<u32>,
    accepting: Vec<bool>,
    /// `next[state][letter]` lists successor states.
    next: Vec<Vec<Vec<u32>>>,
}

impl Nfa {
    pub fn empty(tracks: usize, states: usize) -> Self {
        assert!(tracks >= 1 && tracks <= MAX_TRACKS);
        Nfa {
            tracks,
            initials: Vec::new(),
            accepting: vec![false; states],
            next: vec![vec![Vec::new(); 1 << tracks]; states],
        }
    }

    pub fn add_transition(&mut self, from: usize, letter: u16, to: u32) {
        self.next[from][letter as usize].push(to);
    }

    /// Subset construction. The result is a complete DFA; the empty subset
    /// becomes a dead state when some letter has no successor.
    pub fn determinize(&self) -> Dfa {
        let alphabet = 1usize << self.tracks;
        let mut start: Vec<u32> = self.initials.clone();
        start.sort_unstable();
        start.dedup();
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut subsets: Vec<Vec<u32>> = Vec::new();
        ids.insert(start.clone(), 0);
        subsets.push(start);
        let mut next: Vec<u32> = Vec::new();
        let mut head = 0;
        while head < subsets.len() {
            let current = subsets[head].clone();
            for letter in 0..alphabet {
                let mut target: Vec<u32> = Vec::new();
                for &s in &current {
                    target.extend_from_slice(&self.next[s as usize][letter]);
                }
                target.sort_unstable();
                target.dedup();
                let id = *ids.entry(target.clone()).or_insert_with(|| {
                    subsets.push(target);
                    (subsets.len() - 1) as u32
                });
                next.push(id);
            }
            head += 1;
        }
        let accepting = subsets
            .iter()
            .map(|subset| subset.iter().any(|&s| self.accepting[s as usize]))
            .collect();
        Dfa::new(self.tracks, 0, accepting, next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeration::{align_values, encode_u64, Word};

    #[test]
    fn product_and_complement_on_small_languages() {
        let eq = Dfa::eq();
        let lt = Dfa::lt();
        let le = eq.product(&lt, BoolOp::Or).unwrap();
        for x in 0..20u64 {
            for y in 0..20u64 {
                let w = align_values(&[x, y]);
                assert_eq!(eq.accepts(&w).unwrap(), x == y);
                assert_eq!(lt.accepts(&w).unwrap(), x < y);
                assert_eq!(le.accepts(&w).unwrap(), x <= y);
                assert_eq!(lt.complement().accepts(&w).unwrap(), x >= y);
            }
        }
    }

    #[test]
    fn minimization_preserves_language_and_canonicalizes() {
        let le = Dfa::eq().product(&Dfa::lt(), BoolOp::Or).unwrap();
        let m = le.minimized();
        assert!(m.equivalent(&le).unwrap());
        assert_eq!(m.initial(), 0);
        // Re-minimizing is a fixed point.
        assert_eq!(m.minimized(), m);
    }

    #[test]
    fn zero_saturation_closes_under_leading_zero_removal() {
        // Automaton accepting exactly "01": saturation adds "1".
        let dead = 3u32;
        let next = vec![
            1, dead, // state 0: on 0 -> 1, on 1 -> dead
            dead, 2, // state 1: on 0 -> dead, on 1 -> 2 (accept)
            dead, dead, // state 2
            dead, dead, // dead
        ];
        let d = Dfa::new(1, 0, vec![false, false, true, false], next);
        assert!(d.accepts(&Word::parse_bits("01").unwrap()).unwrap());
        assert!(!d.accepts(&Word::parse_bits("1").unwrap()).unwrap());
        let s = d.zero_saturate();
        assert!(s.accepts(&Word::parse_bits("01").unwrap()).unwrap());
        assert!(s.accepts(&Word::parse_bits("1").unwrap()).unwrap());
        assert!(!s.accepts(&Word::parse_bits("11").unwrap()).unwrap());
    }

    #[test]
    fn projection_of_sum_constraint_bounds_the_remaining_track() {
        // x + y = z and z = 3, over (x, y, z); projecting y leaves (x, z).
        let add = Dfa::add();
        let three = Dfa::constant(3u32.into());
        let z_is_3 = three.spread_tracks(3, &[2]);
        let both = add.product(&z_is_3, BoolOp::And).unwrap().minimized();
        let projected = both.project_exists(1).unwrap();
        assert_eq!(projected.tracks(), 2);
        for x in 0..=8u64 {
            for z in 0..=8u64 {
                let expected = z == 3 && x <= 3;
                let got = projected.accepts(&align_values(&[x, z])).unwrap();
                assert_eq!(got, expected, "x={x} z={z}");
            }
        }
    }

    #[test]
    fn equivalence_distinguishes_languages() {
        assert!(!Dfa::eq().equivalent(&Dfa::lt().complement()).unwrap());
        assert!(Dfa::eq()
            .equivalent(&Dfa::eq().minimized())
            .unwrap());
        assert_eq!(
            Dfa::eq().equivalent(&Dfa::universal(1)),
            Err(AutomataError::TrackMismatch(2, 1))
        );
    }

    #[test]
    fn leading_zero_invariance_of_builtins() {
        for d in [Dfa::eq(), Dfa::lt(), Dfa::add(), Dfa::constant(13u32.into())] {
            assert!(d.is_leading_zero_invariant());
        }
        for n in [0u64, 1, 2, 3, 12, 47, 48] {
            let d = Dfa::constant(n.into());
            let w = encode_u64(n);
            for j in 0..4 {
                assert!(d.accepts(&w.with_leading_zeros(j)).unwrap());
            }
        }
    }

    #[test]
    fn sink_detection() {
        assert!(Dfa::eq().sink().is_some());
        assert!(Dfa::universal(2).sink().is_none());
    }
}
