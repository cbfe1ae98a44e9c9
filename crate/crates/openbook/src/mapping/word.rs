//! Twist words: lowercase letters are right-handed Dehn twists, uppercase
//! left-handed, and a word acts right to left.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::surface::{CurveCoords, Triangulation};

use super::{twist, MappingClass, TwistError};

#[derive(Debug, Error)]
pub enum WordError {
    #[error("letter `{0}` is not in the alphabet")]
    UnknownLetter(char),
    #[error("letter `{0}`: {1}")]
    Twist(char, TwistError),
    #[error(transparent)]
    Move(#[from] super::MoveError),
}

/// A parsed twist word: letters with signs, in reading order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistWord {
    pub letters: Vec<(char, i64)>,
}

impl std::fmt::Display for TwistWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &(c, sign) in &self.letters {
            let ch = if sign >= 0 { c } else { c.to_ascii_uppercase() };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

/// Parses ASCII twist words: case encodes handedness.
pub fn parse_word(text: &str) -> TwistWord {
    let letters = text
        .chars()
        .filter(|c| c.is_ascii_alphabetic())
        .map(|c| {
            if c.is_ascii_uppercase() {
                (c.to_ascii_lowercase(), -1)
            } else {
                (c, 1)
            }
        })
        .collect();
    TwistWord { letters }
}

/// Builds the mapping class of a twist word over a named alphabet. The
/// rightmost letter acts first.
pub fn from_word(
    t: &Triangulation,
    alphabet: &BTreeMap<String, CurveCoords>,
    word: &TwistWord,
) -> Result<MappingClass, WordError> {
    let mut out = MappingClass::identity(t);
    let mut cache: BTreeMap<(char, i64), MappingClass> = BTreeMap::new();
    for &(letter, sign) in word.letters.iter().rev() {
        let key = (letter, sign);
        if !cache.contains_key(&key) {
            let coords = alphabet
                .get(&letter.to_string())
                .ok_or(WordError::UnknownLetter(letter))?;
            let tw = twist(t, coords, sign).map_err(|e| WordError::Twist(letter, e))?;
            cache.insert(key, tw);
        }
        out = out.then(&cache[&key])?;
    }
    Ok(out)
}

/// Builds the letter alphabet a, b, c, ... over a fiber's chain alphabet `c1..c2g` written
/// as letters `a, b, c, ...`.
pub fn chain_alphabet(t: &Triangulation) -> BTreeMap<String, CurveCoords> {
    let mut out = BTreeMap::new();
    for (i, letter) in ('a'..='z').enumerate() {
        let name = format!("c{}", i + 1);
        if let Some(c) = t.labels.curves.get(&name) {
            out.insert(letter.to_string(), c.clone());
        }
    }
    out
}
