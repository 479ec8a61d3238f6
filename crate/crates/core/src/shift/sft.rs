use super::graph::DeBruijnGraph;
use crate::error::ShiftError;
use crate::word::{Word, MAX_ALPHABET};

/// A one-sided shift of finite type given by a forbidden-word list.
///
/// The forbidden list is kept in normal form: no word contains another
/// forbidden word as a factor. The De Bruijn presentation is built once at
/// construction.
#[derive(Debug, Clone)]
pub struct SftSpec {
    alphabet: u8,
    forbidden: Vec<Word>,
    memory: usize,
    graph: DeBruijnGraph,
}

impl PartialEq for SftSpec {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.forbidden == other.forbidden
    }
}

impl Eq for SftSpec {}

impl SftSpec {
    /// Normalizing constructor; words absorbed by shorter forbidden factors
    /// are dropped silently. Use [`SftSpec::normalized`] to see them.
    pub fn new(alphabet: u8, forbidden: Vec<Word>) -> Result<Self, ShiftError> {
        Self::normalized(alphabet, forbidden).map(|(spec, _)| spec)
    }

    /// Builds the spec and returns the forbidden words removed by
    /// normalization (duplicates and words with a forbidden proper factor).
    pub fn normalized(alphabet: u8, forbidden: Vec<Word>) -> Result<(Self, Vec<Word>), ShiftError> {
        if alphabet == 0 || alphabet > MAX_ALPHABET {
            return Err(ShiftError::InvalidSpec(format!(
                "alphabet size must be in 1..={MAX_ALPHABET}, got {alphabet}"
            )));
        }
        for w in &forbidden {
            if w.is_empty() {
                return Err(ShiftError::InvalidSpec("empty forbidden word".into()));
            }
            if let Some(s) = w.max_symbol().filter(|&s| s >= alphabet) {
                return Err(ShiftError::SymbolOutOfRange { symbol: s, alphabet });
            }
        }
        let mut sorted = forbidden;
        sorted.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut kept: Vec<Word> = Vec::new();
        let mut removed = Vec::new();
        for w in sorted {
            if kept.iter().any(|k| w.contains_factor(k)) {
                removed.push(w);
            } else {
                kept.push(w);
            }
        }
        kept.sort();
        let memory = kept.iter().map(Word::len).max().unwrap_or(0);
        let graph = DeBruijnGraph::build(alphabet, &kept, memory);
        Ok((
            SftSpec {
                alphabet,
                forbidden: kept,
                memory,
                graph,
            },
            removed,
        ))
    }

    /// The full shift on `alphabet` symbols.
    pub fn full(alphabet: u8) -> Result<Self, ShiftError> {
        Self::new(alphabet, Vec::new())
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn forbidden(&self) -> &[Word] {
        &self.forbidden
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn graph(&self) -> &DeBruijnGraph {
        &self.graph
    }

    /// True if `w` has no forbidden factor (local admissibility only).
    pub fn avoids_forbidden(&self, w: &[u8]) -> bool {
        !self
            .forbidden
            .iter()
            .any(|f| crate::word::contains_factor(w, f.symbols()))
    }
}

/// Presentation graph of an SFT.
pub fn build_graph(spec: &SftSpec) -> DeBruijnGraph {
    spec.graph.clone()
}
