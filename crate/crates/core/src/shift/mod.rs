//! Base shift spaces and their mixing hierarchy.

mod graph;
mod sft;
mod spacing;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

pub use graph::{BoolMatrix, DeBruijnGraph};
pub use sft::{build_graph, SftSpec};
pub use spacing::{GapSet, SpacingClass, SpacingSpec, DEFAULT_HORIZON};

use crate::error::{ParseError, ShiftError};
use crate::word::{Symbol, Word};

/// A finite set of `(position, symbol)` requirements on a one-sided point.
/// Positions start at 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Constraints(BTreeMap<u64, Symbol>);

impl Constraints {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fails on position 0 or on a position listed with two different symbols.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, Symbol)>) -> Result<Self, ShiftError> {
        let mut c = Constraints::new();
        for (p, s) in pairs {
            c.insert(p, s)?;
        }
        Ok(c)
    }

    /// `word` laid out starting at position `start`.
    pub fn word_at(word: &Word, start: u64) -> Self {
        Constraints(
            word.symbols()
                .iter()
                .enumerate()
                .map(|(i, &s)| (start + i as u64, s))
                .collect(),
        )
    }

    pub fn insert(&mut self, position: u64, symbol: Symbol) -> Result<(), ShiftError> {
        if position == 0 {
            return Err(ShiftError::InvalidPosition(0));
        }
        match self.0.insert(position, symbol) {
            Some(prev) if prev != symbol => {
                self.0.insert(position, prev);
                Err(ShiftError::ContradictoryConstraint {
                    position,
                    first: prev,
                    second: symbol,
                })
            }
            _ => Ok(()),
        }
    }

    /// Adds every constraint of `other` moved right by `offset`.
    pub fn merge_shifted(&mut self, other: &Constraints, offset: u64) -> Result<(), ShiftError> {
        for (&p, &s) in &other.0 {
            self.insert(p + offset, s)?;
        }
        Ok(())
    }

    pub fn get(&self, position: u64) -> Option<Symbol> {
        self.0.get(&position).copied()
    }

    pub fn range(&self, lo: u64, hi: u64) -> impl Iterator<Item = (u64, Symbol)> + '_ {
        self.0.range(lo..=hi).map(|(&p, &s)| (p, s))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Symbol)> + '_ {
        self.0.iter().map(|(&p, &s)| (p, s))
    }

    pub fn max_position(&self) -> Option<u64> {
        self.0.keys().next_back().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn max_symbol(&self) -> Option<Symbol> {
        self.0.values().copied().max()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Extensible,
    Transitive,
    TotallyTransitive,
    WeaklyMixing,
    Mixing,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Extensible,
        Property::Transitive,
        Property::TotallyTransitive,
        Property::WeaklyMixing,
        Property::Mixing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Extensible => "extensible",
            Property::Transitive => "transitive",
            Property::TotallyTransitive => "totally_transitive",
            Property::WeaklyMixing => "weakly_mixing",
            Property::Mixing => "mixing",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| ParseError::new(format!("unknown property {s:?}")))
    }
}

/// Graph facts backing an SFT verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFacts {
    pub vertex_len: usize,
    pub vertices: usize,
    pub pruned: Vec<Word>,
    pub components: usize,
    pub strongly_connected: bool,
    pub period: Option<u64>,
    pub primitivity_exponent: Option<usize>,
    /// Vertices with bounded in-paths (witnesses against extensibility).
    pub bounded_in_paths: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Graph(GraphFacts),
    EmptyLanguage,
    Declared { class: SpacingClass, horizon: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub property: Property,
    pub value: bool,
    pub evidence: Evidence,
}

/// A base shift: either an SFT or a spacing shift, behind one
/// word-admissibility interface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShiftSpec {
    Sft(SftSpec),
    Spacing(SpacingSpec),
}

impl From<SftSpec> for ShiftSpec {
    fn from(s: SftSpec) -> Self {
        ShiftSpec::Sft(s)
    }
}

impl From<SpacingSpec> for ShiftSpec {
    fn from(s: SpacingSpec) -> Self {
        ShiftSpec::Spacing(s)
    }
}

impl ShiftSpec {
    /// Convenience constructor for an SFT from string words.
    pub fn sft(alphabet: u8, forbidden: &[&str]) -> Result<Self, ShiftError> {
        let words = forbidden
            .iter()
            .map(|w| w.parse::<Word>().map_err(|e| ShiftError::InvalidSpec(e.message)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ShiftSpec::Sft(SftSpec::new(alphabet, words)?))
    }

    pub fn alphabet(&self) -> u8 {
        match self {
            ShiftSpec::Sft(s) => s.alphabet(),
            ShiftSpec::Spacing(_) => 2,
        }
    }

    /// True if the shift has no points.
    pub fn is_empty(&self) -> bool {
        match self {
            ShiftSpec::Sft(s) => s.graph().is_empty(),
            ShiftSpec::Spacing(_) => false,
        }
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        match self {
            ShiftSpec::Sft(s) => {
                let f: Vec<String> = s.forbidden().iter().map(Word::to_string).collect();
                format!("sft(m={};F={{{}}})", s.alphabet(), f.join(","))
            }
            ShiftSpec::Spacing(s) => match s.gaps() {
                GapSet::Cofinite { complement } => {
                    let c: Vec<String> = complement.iter().map(u64::to_string).collect();
                    format!("spacing(cofinite;P=N0\\{{{}}})", c.join(","))
                }
                GapSet::PowerComplement { offset, base } => {
                    format!("spacing(thick;P=N0\\{{{offset}+{base}^n}})")
                }
                GapSet::Explicit { members } => format!("spacing(general;|P|={})", members.len()),
            },
        }
    }

    fn check_symbols(&self, c: &Constraints) -> Result<(), ShiftError> {
        let alphabet = self.alphabet();
        match c.max_symbol() {
            Some(s) if s >= alphabet => Err(ShiftError::SymbolOutOfRange { symbol: s, alphabet }),
            _ => Ok(()),
        }
    }

    /// `B_n`: admissible words of length `n`, sorted.
    pub fn blocks(&self, n: usize) -> Result<Vec<Word>, ShiftError> {
        match self {
            ShiftSpec::Sft(s) => Ok(s.graph().words(n)),
            ShiftSpec::Spacing(s) => s.words(n),
        }
    }

    /// `|B_n|` without enumerating (for SFTs).
    pub fn count_blocks(&self, n: usize) -> Result<BigUint, ShiftError> {
        match self {
            ShiftSpec::Sft(s) => Ok(s.graph().count_words(n)),
            ShiftSpec::Spacing(s) => Ok(BigUint::from(s.words(n)?.len())),
        }
    }

    /// Whether some point of the shift satisfies every constraint.
    pub fn partial_extendable(&self, constraints: &Constraints) -> Result<bool, ShiftError> {
        self.check_symbols(constraints)?;
        match self {
            ShiftSpec::Sft(s) => Ok(s.graph().feasible(constraints)),
            ShiftSpec::Spacing(s) => {
                if let Some(p) = constraints.max_position() {
                    s.check_position(p)?;
                }
                let ones: Vec<u64> = constraints.iter().filter(|&(_, v)| v == 1).map(|(p, _)| p).collect();
                s.ones_compatible(&ones)
            }
        }
    }

    /// `w ∈ B(Ω)`.
    pub fn is_block(&self, w: &Word) -> Result<bool, ShiftError> {
        if w.is_empty() {
            return Ok(!self.is_empty());
        }
        self.partial_extendable(&Constraints::word_at(w, 1))
    }

    /// Lexicographically least admissible word of length `len` satisfying the
    /// constraints (constraints past `len` still have to be realizable).
    pub fn least_completion(&self, constraints: &Constraints, len: usize) -> Result<Option<Word>, ShiftError> {
        self.check_symbols(constraints)?;
        match self {
            ShiftSpec::Sft(s) => Ok(s.graph().least_completion(constraints, len)),
            ShiftSpec::Spacing(s) => {
                if !self.partial_extendable(constraints)? {
                    return Ok(None);
                }
                s.check_position(len as u64)?;
                let w: Vec<Symbol> = (1..=len as u64).map(|p| constraints.get(p).unwrap_or(0)).collect();
                Ok(Some(Word::new(w)))
            }
        }
    }

    /// Lexicographically least admissible word of length `len`.
    pub fn least_word(&self, len: usize) -> Result<Option<Word>, ShiftError> {
        self.least_completion(&Constraints::new(), len)
    }

    fn graph_facts(g: &DeBruijnGraph) -> GraphFacts {
        let depth = g.max_in_depth();
        GraphFacts {
            vertex_len: g.vertex_len(),
            vertices: g.vertex_count(),
            pruned: g.pruned().to_vec(),
            components: g.components().len(),
            strongly_connected: g.is_strongly_connected(),
            period: g.period(),
            primitivity_exponent: g.primitivity_exponent(),
            bounded_in_paths: g
                .vertices()
                .iter()
                .zip(depth)
                .filter(|(_, d)| d.is_some())
                .map(|(w, _)| w.clone())
                .collect(),
        }
    }

    /// Decides one property of the mixing hierarchy.
    ///
    /// For SFTs, totally transitive and weakly mixing are decided as mixing:
    /// a transitive SFT of period `p >= 2` is not totally transitive, and an
    /// aperiodic transitive SFT is mixing.
    pub fn decide(&self, property: Property) -> Result<PropertyVerdict, ShiftError> {
        match self {
            ShiftSpec::Sft(s) => {
                let g = s.graph();
                if g.is_empty() {
                    return Ok(PropertyVerdict {
                        property,
                        value: false,
                        evidence: Evidence::EmptyLanguage,
                    });
                }
                let facts = Self::graph_facts(g);
                let value = match property {
                    Property::Extensible => facts.bounded_in_paths.is_empty(),
                    Property::Transitive => facts.strongly_connected,
                    Property::TotallyTransitive | Property::WeaklyMixing | Property::Mixing => {
                        facts.strongly_connected && facts.period == Some(1)
                    }
                };
                Ok(PropertyVerdict {
                    property,
                    value,
                    evidence: Evidence::Graph(facts),
                })
            }
            ShiftSpec::Spacing(s) => {
                let value = match (property, s.class()) {
                    // Zeros can always be prepended.
                    (Property::Extensible, _) => true,
                    (Property::Mixing, SpacingClass::Cofinite) => true,
                    (Property::Mixing, SpacingClass::Thick) => false,
                    (_, SpacingClass::Cofinite | SpacingClass::Thick) => true,
                    (p, SpacingClass::General) => {
                        return Err(ShiftError::Undecidable {
                            property: p,
                            reason: "gap set declared general; only cofinite or thick declarations are decidable"
                                .into(),
                        })
                    }
                };
                Ok(PropertyVerdict {
                    property,
                    value,
                    evidence: Evidence::Declared {
                        class: s.class(),
                        horizon: s.horizon(),
                    },
                })
            }
        }
    }

    fn require_block(&self, w: &Word) -> Result<(), ShiftError> {
        if self.is_block(w)? {
            Ok(())
        } else {
            Err(ShiftError::Inadmissible(w.to_string()))
        }
    }

    /// Whether `u` at `[1, |u|]` and `v` at `[|u|+gap+1, ...]` fit in one point.
    pub fn connects(&self, u: &Word, v: &Word, gap: u64) -> Result<bool, ShiftError> {
        let mut c = Constraints::word_at(u, 1);
        c.merge_shifted(&Constraints::word_at(v, 1), u.len() as u64 + gap)?;
        self.partial_extendable(&c)
    }

    /// All gaps `m` in `1..=bound` at which `u` connects to `v`.
    pub fn connector_gaps(&self, u: &Word, v: &Word, bound: u64) -> Result<BTreeSet<u64>, ShiftError> {
        self.require_block(u)?;
        self.require_block(v)?;
        let mut out = BTreeSet::new();
        for m in 1..=bound {
            if self.connects(u, v, m)? {
                out.insert(m);
            }
        }
        Ok(out)
    }

    /// Smallest gap `m <= bound` valid for every pair at once.
    pub fn simultaneous_connector(&self, pairs: &[(Word, Word)], bound: u64) -> Result<Option<u64>, ShiftError> {
        for (u, v) in pairs {
            self.require_block(u)?;
            self.require_block(v)?;
        }
        'gap: for m in 1..=bound {
            for (u, v) in pairs {
                if !self.connects(u, v, m)? {
                    continue 'gap;
                }
            }
            return Ok(Some(m));
        }
        Ok(None)
    }

    /// Smallest start offset `K` in `min_start..=bound` such that, for every
    /// pair, the left constraints together with the right constraints moved
    /// right by `K` are realizable. This is the aligned form used for fiber
    /// pairs of unequal length: every right word begins at position `K + 1`.
    pub fn simultaneous_start(
        &self,
        pairs: &[(Constraints, Constraints)],
        min_start: u64,
        bound: u64,
    ) -> Result<Option<u64>, ShiftError> {
        'start: for k in min_start..=bound {
            for (left, right) in pairs {
                let mut c = left.clone();
                if c.merge_shifted(right, k).is_err() {
                    continue 'start;
                }
                if !self.partial_extendable(&c)? {
                    continue 'start;
                }
            }
            return Ok(Some(k));
        }
        Ok(None)
    }

    /// An index `N` such that any two admissible words connect at every gap
    /// `m >= N`. For SFTs this is the primitivity exponent, for cofinite
    /// spacing shifts the largest excluded gap plus one. Either bound is one
    /// larger than needed, so gaps `m >= N - 1` connect as well; the bound
    /// does not depend on `max_word_len`.
    pub fn mixing_gap_index(&self, max_word_len: usize) -> Result<u64, ShiftError> {
        let _ = max_word_len;
        if !self.decide(Property::Mixing)?.value {
            return Err(ShiftError::NotMixing);
        }
        match self {
            ShiftSpec::Sft(s) => Ok(s.graph().primitivity_exponent().unwrap_or(1).max(1) as u64),
            ShiftSpec::Spacing(s) => Ok(s.max_excluded().unwrap_or(0) + 1),
        }
    }

    /// SFT presentation, if any.
    pub fn as_sft(&self) -> Option<&SftSpec> {
        match self {
            ShiftSpec::Sft(s) => Some(s),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn strs(ws: &[Word]) -> Vec<String> {
        ws.iter().map(Word::to_string).collect()
    }

    #[test]
    fn blocks_examples() {
        let gm = ShiftSpec::sft(2, &["11"]).unwrap();
        assert_eq!(strs(&gm.blocks(2).unwrap()), ["00", "01", "10"]);
        assert_eq!(gm.blocks(4).unwrap().len(), 8);
        assert_eq!(gm.count_blocks(4).unwrap(), BigUint::from(8u32));

        let p = ShiftSpec::Spacing(SpacingSpec::cofinite([1, 2]).unwrap());
        assert_eq!(strs(&p.blocks(3).unwrap()), ["000", "001", "010", "100"]);
    }

    #[test]
    fn partial_extendable_examples() {
        let gm = ShiftSpec::sft(2, &["11"]).unwrap();
        let c = Constraints::from_pairs([(1, 1), (2, 1)]).unwrap();
        assert!(!gm.partial_extendable(&c).unwrap());

        let f01 = ShiftSpec::sft(2, &["01"]).unwrap();
        let c = Constraints::from_pairs([(2, 0), (5, 1)]).unwrap();
        assert!(!f01.partial_extendable(&c).unwrap());

        let alt = ShiftSpec::sft(2, &["00", "11"]).unwrap();
        // 0101...: odd positions carry 0, even positions carry 1.
        let c = Constraints::from_pairs([(1, 0), (4, 1)]).unwrap();
        assert!(alt.partial_extendable(&c).unwrap());
        let c = Constraints::from_pairs([(1, 0), (4, 0)]).unwrap();
        assert!(!alt.partial_extendable(&c).unwrap());
        let c = Constraints::from_pairs([(1, 0), (3, 0)]).unwrap();
        assert!(alt.partial_extendable(&c).unwrap());
    }

    #[test]
    fn contradictory_constraints() {
        let err = Constraints::from_pairs([(3, 0), (3, 1)]).unwrap_err();
        assert!(matches!(err, ShiftError::ContradictoryConstraint { position: 3, .. }));
        assert!(Constraints::from_pairs([(0, 1)]).is_err());
        assert!(Constraints::from_pairs([(2, 1), (2, 1)]).is_ok());
    }

    #[test]
    fn symbols_are_range_checked() {
        let gm = ShiftSpec::sft(2, &["11"]).unwrap();
        let c = Constraints::from_pairs([(1, 2)]).unwrap();
        assert!(matches!(
            gm.partial_extendable(&c),
            Err(ShiftError::SymbolOutOfRange { .. })
        ));
    }

    #[test]
    fn decide_examples() {
        let f01 = ShiftSpec::sft(2, &["01"]).unwrap();
        assert!(f01.decide(Property::Extensible).unwrap().value);
        assert!(!f01.decide(Property::Transitive).unwrap().value);

        let alt = ShiftSpec::sft(2, &["00", "11"]).unwrap();
        assert!(alt.decide(Property::Transitive).unwrap().value);
        assert!(!alt.decide(Property::WeaklyMixing).unwrap().value);
        assert!(!alt.decide(Property::TotallyTransitive).unwrap().value);

        let p = ShiftSpec::Spacing(SpacingSpec::cofinite([1, 2]).unwrap());
        assert!(p.decide(Property::Mixing).unwrap().value);

        let thick = ShiftSpec::Spacing(SpacingSpec::power_complement(2, 10).unwrap());
        assert!(thick.decide(Property::WeaklyMixing).unwrap().value);
        assert!(!thick.decide(Property::Mixing).unwrap().value);
    }

    #[test]
    fn empty_language_is_all_false() {
        let empty = ShiftSpec::sft(2, &["0", "1"]).unwrap();
        assert!(empty.is_empty());
        for p in Property::ALL {
            let v = empty.decide(p).unwrap();
            assert!(!v.value);
            assert_eq!(v.evidence, Evidence::EmptyLanguage);
        }
    }

    #[test]
    fn general_spacing_is_undecidable() {
        let s = ShiftSpec::Spacing(
            SpacingSpec::new(
                GapSet::Explicit {
                    members: [0, 5].into_iter().collect(),
                },
                SpacingClass::General,
                100,
            )
            .unwrap(),
        );
        assert!(s.decide(Property::Extensible).unwrap().value);
        assert!(matches!(
            s.decide(Property::Mixing),
            Err(ShiftError::Undecidable { .. })
        ));
    }

    #[test]
    fn connector_examples() {
        let gm = ShiftSpec::sft(2, &["11"]).unwrap();
        let g = gm.connector_gaps(&w("1"), &w("1"), 4).unwrap();
        assert_eq!(g.into_iter().collect::<Vec<_>>(), [1, 2, 3, 4]);

        let alt = ShiftSpec::sft(2, &["00", "11"]).unwrap();
        let g = alt.connector_gaps(&w("0"), &w("0"), 4).unwrap();
        assert_eq!(g.into_iter().collect::<Vec<_>>(), [1, 3]);

        let f01 = ShiftSpec::sft(2, &["01"]).unwrap();
        assert!(f01.connector_gaps(&w("0"), &w("1"), 6).unwrap().is_empty());

        assert!(matches!(
            gm.connector_gaps(&w("11"), &w("1"), 3),
            Err(ShiftError::Inadmissible(_))
        ));
    }

    #[test]
    fn simultaneous_examples() {
        let gm = ShiftSpec::sft(2, &["11"]).unwrap();
        assert_eq!(
            gm.simultaneous_connector(&[(w("1"), w("1")), (w("0"), w("0"))], 4)
                .unwrap(),
            Some(1)
        );
        let alt = ShiftSpec::sft(2, &["00", "11"]).unwrap();
        assert_eq!(
            alt.simultaneous_connector(&[(w("0"), w("0")), (w("0"), w("1"))], 8)
                .unwrap(),
            None
        );
    }

    #[test]
    fn mixing_gap_index_examples() {
        let gm = ShiftSpec::sft(2, &["11"]).unwrap();
        assert_eq!(gm.mixing_gap_index(1).unwrap(), 2);
        let p = ShiftSpec::Spacing(SpacingSpec::cofinite([1, 2]).unwrap());
        assert_eq!(p.mixing_gap_index(8).unwrap(), 3);
        let full = ShiftSpec::sft(2, &[]).unwrap();
        assert_eq!(full.mixing_gap_index(4).unwrap(), 1);
        let alt = ShiftSpec::sft(2, &["00", "11"]).unwrap();
        assert_eq!(alt.mixing_gap_index(2), Err(ShiftError::NotMixing));
    }
}
