//! Uniform morphisms, their fixed points, and the automata they generate.
//!
//! A 2-uniform morphism prolongable on its first letter has a unique infinite
//! fixed point; the letter at position `n` is reached by feeding the base-2
//! digits of `n`, most significant first, through the morphism's image table.
//! Applying an output coding per letter turns that table into a DFAO.

use std::collections::BTreeMap;

use crate::automata::Dfa;
use crate::dfao::Dfao;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MorphismError {
    #[error("empty rule set")]
    Empty,
    #[error("morphism is not {0}-uniform")]
    NotUniform(usize),
    #[error("image of `{0}` uses letter `{1}` which has no rule")]
    UnknownLetter(char, char),
    #[error("morphism is not prolongable: image of `{0}` does not start with it")]
    NotProlongable(char),
    #[error("duplicate rule for letter `{0}`")]
    DuplicateRule(char),
    #[error("malformed rule `{0}`, expected `letter->image`")]
    MalformedRule(String),
}

/// A morphism over single-character letters plus an integer output coding.
/// Letters without a coding entry output zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    rules: Vec<(char, String)>,
    coding: BTreeMap<char, i64>,
}

impl Morphism {
    pub fn new(rules: Vec<(char, String)>, coding: BTreeMap<char, i64>) -> Result<Self, MorphismError> {
        if rules.is_empty() {
            return Err(MorphismError::Empty);
        }
        let mut seen = std::collections::BTreeSet::new();
        for (letter, _) in &rules {
            if !seen.insert(*letter) {
                return Err(MorphismError::DuplicateRule(*letter));
            }
        }
        for (letter, image) in &rules {
            for c in image.chars() {
                if !seen.contains(&c) {
                    return Err(MorphismError::UnknownLetter(*letter, c));
                }
            }
        }
        Ok(Morphism { rules, coding })
    }

    /// Parses rule text like `0->01 1->23` and coding text like `3->1`.
    pub fn parse(rules_text: &str, coding_text: &str) -> Result<Self, MorphismError> {
        let mut rules = Vec::new();
        for item in rules_text.split_whitespace() {
            let (letter, image) = split_rule(item)?;
            if image.is_empty() {
                return Err(MorphismError::MalformedRule(item.to_string()));
            }
            rules.push((letter, image.to_string()));
        }
        let mut coding = BTreeMap::new();
        for item in coding_text.split_whitespace() {
            let (letter, value) = split_rule(item)?;
            let value: i64 =
                value.parse().map_err(|_| MorphismError::MalformedRule(item.to_string()))?;
            coding.insert(letter, value);
        }
        Morphism::new(rules, coding)
    }

    /// The designated first letter (the first rule's source).
    pub fn start(&self) -> char {
        self.rules[0].0
    }

    pub fn image(&self, letter: char) -> Option<&str> {
        self.rules.iter().find(|(l, _)| *l == letter).map(|(_, im)| im.as_str())
    }

    pub fn coding_of(&self, letter: char) -> i64 {
        self.coding.get(&letter).copied().unwrap_or(0)
    }

    /// Common image length if the morphism is uniform.
    pub fn uniform_width(&self) -> Option<usize> {
        let w = self.rules[0].1.chars().count();
        self.rules.iter().all(|(_, im)| im.chars().count() == w).then_some(w)
    }

    /// Iterates the morphism from its start letter until the prefix reaches
    /// `len` letters, then truncates. Requires prolongability.
    pub fn fixed_point_prefix(&self, len: usize) -> Result<Vec<char>, MorphismError> {
        let start = self.start();
        let image = self.image(start).unwrap();
        if !image.starts_with(start) || image.chars().count() < 2 {
            return Err(MorphismError::NotProlongable(start));
        }
        let mut word = vec![start];
        while word.len() < len {
            let mut next = Vec::with_capacity(word.len() * 2);
            for &c in &word {
                next.extend(self.image(c).unwrap().chars());
            }
            if next.len() == word.len() {
                return Err(MorphismError::NotProlongable(start));
            }
            word = next;
        }
        word.truncate(len);
        Ok(word)
    }

    /// The coded fixed point, as output values.
    pub fn coded_prefix(&self, len: usize) -> Result<Vec<i64>, MorphismError> {
        Ok(self.fixed_point_prefix(len)?.iter().map(|&c| self.coding_of(c)).collect())
    }
}

fn split_rule(item: &str) -> Result<(char, &str), MorphismError> {
    let malformed = || MorphismError::MalformedRule(item.to_string());
    let (lhs, rhs) = item.split_once("->").ok_or_else(malformed)?;
    let mut chars = lhs.chars();
    let letter = chars.next().ok_or_else(malformed)?;
    if chars.next().is_some() {
        return Err(malformed());
    }
    Ok((letter, rhs))
}

/// Builds the DFAO computing the coded fixed point of a 2-uniform morphism
/// prolongable on its first letter: one state per letter, transitions given by
/// image positions, outputs given by the coding.
pub fn fixed_point_dfao(m: &Morphism) -> Result<Dfao, MorphismError> {
    if m.uniform_width() != Some(2) {
        return Err(MorphismError::NotUniform(2));
    }
    let start = m.start();
    if !m.image(start).unwrap().starts_with(start) {
        return Err(MorphismError::NotProlongable(start));
    }
    let index: BTreeMap<char, u32> =
        m.rules.iter().enumerate().map(|(i, (l, _))| (*l, i as u32)).collect();
    let mut next = Vec::with_capacity(m.rules.len() * 2);
    let mut outputs = Vec::with_capacity(m.rules.len());
    for (letter, image) in &m.rules {
        for c in image.chars() {
            next.push(index[&c]);
        }
        outputs.push(m.coding_of(*letter));
    }
    let dfa = Dfa::new(1, 0, vec![false; m.rules.len()], next);
    Ok(Dfao::new(dfa, outputs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn thue_morse() -> Morphism {
        Morphism::parse("0->01 1->10", "1->1").unwrap()
    }

    #[test]
    fn thue_morse_fixed_point() {
        let m = thue_morse();
        let dfao = fixed_point_dfao(&m).unwrap();
        for n in 0..4096u64 {
            assert_eq!(dfao.value_u64(n), (n.count_ones() % 2) as i64);
        }
        let prefix = m.coded_prefix(16).unwrap();
        assert_eq!(prefix, vec![0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0]);
    }

    #[test]
    fn dfao_agrees_with_iterated_prefix() {
        let m = thue_morse();
        let dfao = fixed_point_dfao(&m).unwrap();
        let prefix = m.coded_prefix(4096).unwrap();
        for (n, &v) in prefix.iter().enumerate() {
            assert_eq!(dfao.value_u64(n as u64), v, "position {n}");
        }
    }

    #[test]
    fn rejects_bad_morphisms() {
        assert_eq!(
            Morphism::parse("0->12 1->00", "").and_then(|m| fixed_point_dfao(&m)).unwrap_err(),
            MorphismError::UnknownLetter('0', '2')
        );
        let not_prolongable = Morphism::parse("0->10 1->01", "").unwrap();
        assert_eq!(
            fixed_point_dfao(&not_prolongable).unwrap_err(),
            MorphismError::NotProlongable('0')
        );
        let not_uniform = Morphism::parse("0->011 1->10", "").unwrap();
        assert_eq!(fixed_point_dfao(&not_uniform).unwrap_err(), MorphismError::NotUniform(2));
    }
}
