//! Deterministic text and DOT encodings for automata.
//!
//! Text layout: a `tracks <k>` header, one `<state> <accepting>` line per
//! state, then one `<src> <tuple> <dst>` line per transition, where the tuple
//! is the `k` track digits with no separator. States are emitted in canonical
//! breadth-first order, so the initial state is always 0 and automata with
//! equal in-memory structure serialize byte-identically.

use std::fmt::Write as _;

use super::{AutomataError, Dfa};

impl Dfa {
    /// Breadth-first discovery order over reachable states, letters ascending.
    pub(crate) fn bfs_order(&self) -> Vec<u32> {
        let mut order: Vec<u32> = vec![self.initial as u32];
        let mut seen = vec![false; self.states()];
        seen[self.initial] = true;
        let mut head = 0;
        while head < order.len() {
            let s = order[head] as usize;
            for letter in 0..self.alphabet() {
                let t = self.next(s, letter as u16);
                if !seen[t] {
                    seen[t] = true;
                    order.push(t as u32);
                }
            }
            head += 1;
        }
        order
    }

    /// Serializes the reachable part in canonical order.
    pub fn to_text(&self) -> String {
        let order = self.bfs_order();
        let mut id = vec![u32::MAX; self.states()];
        for (i, &s) in order.iter().enumerate() {
            id[s as usize] = i as u32;
        }
        let mut out = String::new();
        writeln!(out, "tracks {}", self.tracks).unwrap();
        for (i, &s) in order.iter().enumerate() {
            writeln!(out, "{} {}", i, u8::from(self.is_accepting(s as usize))).unwrap();
        }
        for (i, &s) in order.iter().enumerate() {
            for letter in 0..self.alphabet() {
                let t = id[self.next(s as usize, letter as u16)];
                writeln!(out, "{} {:0width$b} {}", i, letter, t, width = self.tracks).unwrap();
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Dfa, AutomataError> {
        let (dfa, extra) = parse_automaton(text)?;
        if let Some((line, _)) = extra.first() {
            return Err(AutomataError::Parse {
                line: *line,
                msg: "unexpected trailing lines after transition table".into(),
            });
        }
        Ok(dfa)
    }

    /// GraphViz rendering: one node per state (initial drawn bold, accepting
    /// double-circled), parallel edges merged with comma-joined tuple labels.
    pub fn to_dot(&self) -> String {
        let order = self.bfs_order();
        let mut id = vec![u32::MAX; self.states()];
        for (i, &s) in order.iter().enumerate() {
            id[s as usize] = i as u32;
        }
        let mut out = String::from("digraph automaton {\n  rankdir=LR;\n");
        for (i, &s) in order.iter().enumerate() {
            let shape = if self.is_accepting(s as usize) { "doublecircle" } else { "circle" };
            let style = if i == 0 { ", style=bold" } else { "" };
            writeln!(out, "  {i} [shape={shape}{style}];").unwrap();
        }
        for (i, &s) in order.iter().enumerate() {
            let mut labels: Vec<(u32, Vec<String>)> = Vec::new();
            for letter in 0..self.alphabet() {
                let t = id[self.next(s as usize, letter as u16)];
                let tuple = format!("{:0width$b}", letter, width = self.tracks);
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

/// Parses the DFA section of an automaton text; returns the automaton and any
/// trailing 2-token lines (used by the DFAO format for state outputs).
pub(crate) fn parse_automaton(
    text: &str,
) -> Result<(Dfa, Vec<(usize, (usize, i64))>), AutomataError> {
    let err = |line: usize, msg: &str| AutomataError::Parse { line, msg: msg.into() };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line_no, header) = lines.next().ok_or_else(|| err(0, "empty input"))?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some("tracks") {
        return Err(err(line_no, "expected `tracks <k>` header"));
    }
    let tracks: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| err(line_no, "bad track count"))?;
    if !(1..=crate::numeration::MAX_TRACKS).contains(&tracks) {
        return Err(err(line_no, "track count out of range"));
    }

    let mut accepting: Vec<bool> = Vec::new();
    let mut transitions: Vec<(usize, u16, u32)> = Vec::new();
    let mut trailing: Vec<(usize, (usize, i64))> = Vec::new();
    let mut in_states = true;
    for (line_no, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.len() {
            2 if in_states => {
                let idx: usize =
                    tokens[0].parse().map_err(|_| err(line_no, "bad state index"))?;
                if idx != accepting.len() {
                    return Err(err(line_no, "state lines must be consecutive from 0"));
                }
                match tokens[1] {
                    "0" => accepting.push(false),
                    "1" => accepting.push(true),
                    _ => return Err(err(line_no, "accepting flag must be 0 or 1")),
                }
            }
            2 => {
                let s: usize = tokens[0].parse().map_err(|_| err(line_no, "bad state index"))?;
                let v: i64 = tokens[1].parse().map_err(|_| err(line_no, "bad output value"))?;
                trailing.push((line_no, (s, v)));
            }
            3 => {
                in_states = false;
                let src: usize =
                    tokens[0].parse().map_err(|_| err(line_no, "bad source state"))?;
                let tuple = tokens[1];
                if tuple.len() != tracks || !tuple.bytes().all(|b| b == b'0' || b == b'1') {
                    return Err(err(line_no, "tuple must be k binary digits"));
                }
                let letter = u16::from_str_radix(tuple, 2).unwrap();
                let dst: u32 = tokens[2].parse().map_err(|_| err(line_no, "bad target state"))?;
                transitions.push((src, letter, dst));
            }
            _ => return Err(err(line_no, "expected 2 or 3 tokens")),
        }
    }

    let states = accepting.len();
    if states == 0 {
        return Err(err(0, "no states"));
    }
    let mut next = vec![u32::MAX; states << tracks];
    for (src, letter, dst) in transitions {
        if src >= states || dst as usize >= states {
            return Err(err(0, "transition references unknown state"));
        }
        let slot = (src << tracks) + letter as usize;
        if next[slot] != u32::MAX {
            return Err(err(0, "duplicate transition"));
        }
        next[slot] = dst;
    }
    if next.iter().any(|&t| t == u32::MAX) {
        return Err(err(0, "transition table incomplete"));
    }
    Ok((Dfa::new(tracks, 0, accepting, next), trailing))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::BoolOp;

    #[test]
    fn round_trip_is_identity_on_canonical_automata() {
        for d in [Dfa::eq(), Dfa::lt(), Dfa::add(), Dfa::constant(48u32.into())] {
            let text = d.to_text();
            let parsed = Dfa::from_text(&text).unwrap();
            assert_eq!(parsed.to_text(), text);
            assert!(parsed.equivalent(&d).unwrap());
        }
    }

    #[test]
    fn serialization_is_language_canonical() {
        // Two structurally different automata with the same language
        // serialize identically after minimization.
        let a = Dfa::eq().product(&Dfa::eq(), BoolOp::And).unwrap();
        assert_eq!(a.minimized().to_text(), Dfa::eq().to_text());
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(Dfa::from_text("").is_err());
        assert!(Dfa::from_text("tracks 0\n0 1\n").is_err());
        let incomplete = "tracks 1\n0 1\n0 0 0\n";
        assert!(Dfa::from_text(incomplete).is_err());
    }

    #[test]
    fn dot_output_lists_every_state_once() {
        let dot = Dfa::lt().to_dot();
        assert_eq!(dot.matches("shape=").count(), 3);
        assert!(dot.contains("doublecircle"));
        assert!(dot.contains("label=\"00,11\""));
    }
}
