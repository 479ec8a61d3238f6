//! Symbols and finite words over the alphabet `{0, 1, ..., m-1}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// A symbol of the alphabet. Values are rendered as single decimal digits,
/// so shipped alphabets have at most 10 symbols.
pub type Symbol = u8;

/// Largest alphabet that can be written with single-digit symbols.
pub const MAX_ALPHABET: u8 = 10;

/// A finite word. Index origin is 1 when talking about positions
/// (`x_[i,j]`), but the storage is an ordinary zero-based vector.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// `len` copies of `symbol`.
    pub fn repeat(symbol: Symbol, len: usize) -> Self {
        Word(vec![symbol; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    /// Symbol at 1-based position `pos`.
    pub fn at(&self, pos: usize) -> Option<Symbol> {
        pos.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// True if `needle` occurs as a contiguous factor of `self`.
    pub fn contains_factor(&self, needle: &Word) -> bool {
        contains_factor(&self.0, &needle.0)
    }

    /// Largest symbol used, if any.
    pub fn max_symbol(&self) -> Option<Symbol> {
        self.0.iter().copied().max()
    }
}

pub(crate) fn contains_factor(hay: &[Symbol], needle: &[Symbol]) -> bool {
    if needle.is_empty() {
        return true;
    }
    hay.windows(needle.len()).any(|w| w == needle)
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Word(v.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            write!(f, "{}", s)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self)
    }
}

impl FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(i, c)| {
                c.to_digit(10)
                    .map(|d| d as Symbol)
                    .ok_or_else(|| ParseError::new(format!("invalid symbol {c:?} at offset {i} in word {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All words of length `n` over `alphabet` symbols in lexicographic order.
pub fn all_words(alphabet: u8, n: usize) -> impl Iterator<Item = Word> {
    let total = (alphabet as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    (0..total).map(move |mut code| {
        let mut v = vec![0; n];
        for slot in v.iter_mut().rev() {
            *slot = (code % alphabet as u64) as Symbol;
            code /= alphabet as u64;
        }
        Word(v)
    })
}
