//! Deterministic finite automata with output (one integer per state).
//!
//! A DFAO maps a natural number to the output of the state reached by reading
//! the number's base-2 encoding most significant digit first. Serialization
//! extends the DFA text format with one `<state> <output>` line per state.

use num_bigint::BigUint;

use crate::automata::{AutomataError, Dfa};
use crate::numeration::{encode_canonical, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfao {
    dfa: Dfa,
    outputs: Vec<i64>,
}

impl Dfao {
    pub fn new(dfa: Dfa, outputs: Vec<i64>) -> Self {
        assert_eq!(outputs.len(), dfa.states(), "one output per state");
        Dfao { dfa, outputs }
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn states(&self) -> usize {
        self.dfa.states()
    }

    pub fn tracks(&self) -> usize {
        self.dfa.tracks()
    }

    pub fn output(&self, state: usize) -> i64 {
        self.outputs[state]
    }

    /// Output of the state reached by `w`.
    pub fn value(&self, w: &Word) -> Result<i64, AutomataError> {
        Ok(self.outputs[self.dfa.run(w)?])
    }

    /// Value at the canonical encoding of `n`.
    pub fn value_at(&self, n: &BigUint) -> i64 {
        self.value(&encode_canonical(n)).expect("single-track word")
    }

    pub fn value_u64(&self, n: u64) -> i64 {
        self.value_at(&BigUint::from(n))
    }

    /// The set `{n : value(n) = v}` as a minimal, saturated DFA.
    pub fn value_predicate(&self, v: i64) -> Dfa {
        let accepting: Vec<bool> = self.outputs.iter().map(|&o| o == v).collect();
        let raw = Dfa::new(
            self.tracks(),
            self.dfa.initial(),
            accepting,
            (0..self.states())
                .flat_map(|s| {
                    (0..self.dfa.alphabet()).map(move |l| self.dfa.next(s, l as u16) as u32)
                })
                .collect(),
        );
        raw.zero_saturate().minimized()
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write as _;
        let order = self.dfa.bfs_order();
        let mut out = self.dfa.to_text();
        for (i, &s) in order.iter().enumerate() {
            writeln!(out, "{} {}", i, self.outputs[s as usize]).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Dfao, AutomataError> {
        let (dfa, trailing) = crate::automata::text::parse_automaton(text)?;
        let mut outputs = vec![None; dfa.states()];
        for (line, (s, v)) in trailing {
            if s >= dfa.states() {
                return Err(AutomataError::Parse { line, msg: "output for unknown state".into() });
            }
            if outputs[s].replace(v).is_some() {
                return Err(AutomataError::Parse { line, msg: "duplicate output line".into() });
            }
        }
        let outputs: Option<Vec<i64>> = outputs.into_iter().collect();
        match outputs {
            Some(outputs) => Ok(Dfao::new(dfa, outputs)),
            None => Err(AutomataError::Parse { line: 0, msg: "missing output line".into() }),
        }
    }

    /// GraphViz rendering with `state/output` node labels.
    pub fn to_dot(&self) -> String {
        use std::fmt::Write as _;
        let order = self.dfa.bfs_order();
        let mut id = vec![u32::MAX; self.states()];
        for (i, &s) in order.iter().enumerate() {
            id[s as usize] = i as u32;
        }
        let mut out = String::from("digraph dfao {\n  rankdir=LR;\n");
        for (i, &s) in order.iter().enumerate() {
            let style = if i == 0 { ", style=bold" } else { "" };
            writeln!(
                out,
                "  {i} [shape=circle, label=\"{i}/{}\"{style}];",
                self.outputs[s as usize]
            )
            .unwrap();
        }
        for (i, &s) in order.iter().enumerate() {
            let mut labels: Vec<(u32, Vec<String>)> = Vec::new();
            for letter in 0..self.dfa.alphabet() {
                let t = id[self.dfa.next(s as usize, letter as u16)];
                let tuple = format!("{:0width$b}", letter, width = self.tracks());
                match labels.iter_mut().find(|(dst, _)| *dst == t) {
                    Some((_, ls)) => ls.push(tuple),
                    None => labels.push((t, vec![tuple])),
                }
            }
            for (dst, ls) in labels {
                writeln!(out, "  {i} -> {dst} [label=\"{}\"];", ls.join(",")).unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}
