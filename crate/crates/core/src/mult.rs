//! Patterns of the multiplicative subshift `X_Ω^(l)`.
//!
//! A configuration belongs to `X_Ω^(l)` exactly when its restriction to every
//! chain `(i, il, il², ...)` is a point of `Ω`. Chains for different class
//! representatives are disjoint, so `X_Ω^(l)` is a product of independent
//! copies of `Ω` indexed by `A_l`, and every question about a finite pattern
//! splits into one question per touched class.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{ArithError, MultError, ParseError, ShiftError};
use crate::lambda::{a_set, chain_len, decompose, strip_u128};
use crate::shift::{Constraints, ShiftSpec};
use crate::word::{Symbol, Word};

/// Output guard for [`MultShift::enumerate_blocks`].
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

/// A finite partial configuration: symbols at finitely many positive positions.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    entries: BTreeMap<u64, Symbol>,
}

impl Pattern {
    /// The block occupying `[1, |w|]`.
    pub fn block(w: &Word) -> Self {
        Pattern {
            entries: w
                .symbols()
                .iter()
                .enumerate()
                .map(|(i, &s)| (i as u64 + 1, s))
                .collect(),
        }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (u64, Symbol)>) -> Result<Self, ShiftError> {
        let mut map = BTreeMap::new();
        for (p, s) in entries {
            if p == 0 {
                return Err(ShiftError::InvalidPosition(0));
            }
            if let Some(prev) = map.insert(p, s) {
                if prev != s {
                    return Err(ShiftError::ContradictoryConstraint {
                        position: p,
                        first: prev,
                        second: s,
                    });
                }
            }
        }
        Ok(Pattern { entries: map })
    }

    /// `|u|`: the largest support position (block length for blocks).
    pub fn len(&self) -> u64 {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, position: u64) -> Option<Symbol> {
        self.entries.get(&position).copied()
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.keys().copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, Symbol)> + '_ {
        self.entries.iter().map(|(&p, &s)| (p, s))
    }

    /// Support is exactly `[1, |u|]`.
    pub fn is_block(&self) -> bool {
        self.entries.len() as u64 == self.len()
    }

    pub fn as_word(&self) -> Option<Word> {
        self.is_block()
            .then(|| Word::new(self.entries.values().copied().collect()))
    }

    fn max_symbol(&self) -> Option<Symbol> {
        self.entries.values().copied().max()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(w) = self.as_word() {
            return write!(f, "block:{w}");
        }
        let support: Vec<String> = self.entries.keys().map(u64::to_string).collect();
        let values: Vec<String> = self.entries.values().map(u8::to_string).collect();
        write!(f, "support={};values={}", support.join(","), values.join(","))
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern({self})")
    }
}

/// Parses `block:0110` or `l=2;support=1,2,4;values=1,1,0` (the `l=` field
/// is optional). Returns the base when the literal names one.
pub fn parse_pattern_literal(s: &str) -> Result<(Option<u64>, Pattern), ParseError> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("block:") {
        let w: Word = rest.parse()?;
        if w.is_empty() {
            return Err(ParseError::new("empty block literal"));
        }
        return Ok((None, Pattern::block(&w)));
    }
    let mut base = None;
    let mut support: Option<Vec<u64>> = None;
    let mut values: Option<Vec<Symbol>> = None;
    for field in s.split(';').filter(|f| !f.is_empty()) {
        let (key, val) = field
            .split_once('=')
            .ok_or_else(|| ParseError::new(format!("expected key=value, got {field:?}")))?;
        let nums = |v: &str| -> Result<Vec<u64>, ParseError> {
            v.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<u64>()
                        .map_err(|_| ParseError::new(format!("bad number {x:?} in {key}")))
                })
                .collect()
        };
        match key.trim() {
            "l" => {
                base = Some(
                    val.trim()
                        .parse()
                        .map_err(|_| ParseError::new(format!("bad base {val:?}")))?,
                )
            }
            "support" => support = Some(nums(val)?),
            "values" => {
                values = Some(
                    nums(val)?
                        .into_iter()
                        .map(|x| u8::try_from(x).map_err(|_| ParseError::new("symbol too large")))
                        .collect::<Result<_, _>>()?,
                )
            }
            other => return Err(ParseError::new(format!("unknown pattern field {other:?}"))),
        }
    }
    let support = support.ok_or_else(|| ParseError::new("pattern literal needs support="))?;
    let values = values.ok_or_else(|| ParseError::new("pattern literal needs values="))?;
    if support.len() != values.len() {
        return Err(ParseError::new(format!(
            "support has {} positions but values has {}",
            support.len(),
            values.len()
        )));
    }
    let p = Pattern::from_entries(support.into_iter().zip(values)).map_err(|e| ParseError::new(e.to_string()))?;
    Ok((base, p))
}

impl FromStr for Pattern {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pattern_literal(s).map(|(_, p)| p)
    }
}

impl Serialize for Pattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `q·S`.
pub fn pi_positions(q: u64, support: &BTreeSet<u64>) -> Result<BTreeSet<u64>, ArithError> {
    if q == 0 {
        return Err(ArithError::Zero);
    }
    support
        .iter()
        .map(|&s| s.checked_mul(q).ok_or(ArithError::Overflow))
        .collect()
}

/// A multiplier `Q = factor · l^exp`, kept factored so that huge powers of
/// `l` never overflow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scale {
    pub factor: u64,
    pub exp: u64,
}

impl Scale {
    /// `Q = |u| · α · q^k` for the base `l`.
    pub fn new(l: u64, u_len: u64, alpha: u64, q: u64, k: u64) -> Result<Self, ArithError> {
        let qd = decompose(q, l)?;
        let mut factor = (u_len as u128).checked_mul(alpha as u128).ok_or(ArithError::Overflow)?;
        for _ in 0..k {
            factor = factor.checked_mul(qd.alpha as u128).ok_or(ArithError::Overflow)?;
        }
        let (factor, e) = strip_u128(factor, l);
        Ok(Scale {
            factor: u64::try_from(factor).map_err(|_| ArithError::Overflow)?,
            exp: e + qd.k * k,
        })
    }

    /// Exact value of the multiplier.
    pub fn value(&self, l: u64) -> BigUint {
        BigUint::from(self.factor) * BigUint::from(l).pow(self.exp as u32)
    }

    /// Class representative and depth of the position `Q·s`.
    pub fn place(&self, s: u64, l: u64) -> Result<(u64, u64), ArithError> {
        let prod = (self.factor as u128)
            .checked_mul(s as u128)
            .ok_or(ArithError::Overflow)?;
        let (rep, t) = strip_u128(prod, l);
        let rep = u64::try_from(rep).map_err(|_| ArithError::Overflow)?;
        Ok((rep, t + self.exp + 1))
    }
}

/// Where a constraint in a fiber came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    U,
    V,
}

/// Constraints of `x|_{s(u)} = u` and `(Π_Q x)|_{s(v)} = v`, grouped by class
/// and expressed as depths along each chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplierConstraintSet {
    pub scale: Scale,
    pub groups: BTreeMap<u64, Constraints>,
    /// Classes touched by `u`.
    pub u_classes: BTreeSet<u64>,
    /// For each class `j` of `v`: the target class and the depth of the
    /// first chain element of `v|_{Λ_j}` inside it.
    pub v_targets: BTreeMap<u64, (u64, u64)>,
}

impl MultiplierConstraintSet {
    /// Fails with `ContradictoryConstraint` when `u` and the scaled `v`
    /// disagree on a shared position.
    pub fn build(u: &Pattern, v: &Pattern, scale: Scale, l: u64) -> Result<Self, MultError> {
        let mut groups: BTreeMap<u64, Constraints> = BTreeMap::new();
        let mut u_classes = BTreeSet::new();
        for (p, s) in u.entries() {
            let d = decompose(p, l)?;
            groups.entry(d.alpha).or_default().insert(d.k + 1, s)?;
            u_classes.insert(d.alpha);
        }
        let mut v_targets = BTreeMap::new();
        for (p, s) in v.entries() {
            let (rep, depth) = scale.place(p, l)?;
            groups.entry(rep).or_default().insert(depth, s)?;
            let j = decompose(p, l)?;
            v_targets
                .entry(j.alpha)
                .and_modify(|e: &mut (u64, u64)| e.1 = e.1.min(depth - j.k))
                .or_insert((rep, depth - j.k));
        }
        Ok(MultiplierConstraintSet {
            scale,
            groups,
            u_classes,
            v_targets,
        })
    }

    /// Largest constrained position `rep · l^(depth-1)` over all groups.
    pub fn max_position(&self, l: u64) -> BigUint {
        self.groups
            .iter()
            .filter_map(|(&rep, c)| {
                c.max_position()
                    .map(|d| BigUint::from(rep) * BigUint::from(l).pow((d - 1) as u32))
            })
            .max()
            .unwrap_or_default()
    }
}

/// The multiplicative subshift `X_Ω^(l)` for a fixed base shift and base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultShift {
    omega: ShiftSpec,
    base: u64,
}

impl MultShift {
    pub fn new(omega: ShiftSpec, base: u64) -> Result<Self, ArithError> {
        if base < 2 {
            return Err(ArithError::BaseTooSmall(base));
        }
        Ok(MultShift { omega, base })
    }

    pub fn omega(&self) -> &ShiftSpec {
        &self.omega
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    fn check_rep(&self, i: u64) -> Result<(), MultError> {
        if i == 0 || i % self.base == 0 {
            Err(MultError::NotRepresentative(i))
        } else {
            Ok(())
        }
    }

    /// `u|_{Λ_i}` as a partial word: depth `j` reads position `i·l^(j-1)`,
    /// for every chain position up to `|u|` (the position `|u|` itself
    /// included).
    pub fn fiber(&self, u: &Pattern, i: u64) -> Result<Vec<Option<Symbol>>, MultError> {
        self.check_rep(i)?;
        let n = chain_len(i, self.base, u.len());
        let mut out = Vec::with_capacity(n as usize);
        let mut pos = i;
        for _ in 0..n {
            out.push(u.get(pos));
            pos = pos.saturating_mul(self.base);
        }
        Ok(out)
    }

    /// Depth-indexed constraints of `u` along each touched class.
    pub fn fiber_constraints(&self, u: &Pattern) -> Result<BTreeMap<u64, Constraints>, MultError> {
        let mut out: BTreeMap<u64, Constraints> = BTreeMap::new();
        for (p, s) in u.entries() {
            let d = decompose(p, self.base)?;
            out.entry(d.alpha).or_default().insert(d.k + 1, s)?;
        }
        Ok(out)
    }

    /// The first class whose fiber is not realizable in `Ω`, if any.
    pub fn first_violation(&self, u: &Pattern) -> Result<Option<u64>, MultError> {
        if let Some(s) = u.max_symbol().filter(|&s| s >= self.omega.alphabet()) {
            return Err(ShiftError::SymbolOutOfRange {
                symbol: s,
                alphabet: self.omega.alphabet(),
            }
            .into());
        }
        for (rep, c) in self.fiber_constraints(u)? {
            if !self.omega.partial_extendable(&c)? {
                return Ok(Some(rep));
            }
        }
        Ok(None)
    }

    /// Whether some point of `X_Ω^(l)` extends `u`.
    pub fn is_admissible(&self, u: &Pattern) -> Result<bool, MultError> {
        if self.omega.is_empty() {
            return Ok(false);
        }
        Ok(self.first_violation(u)?.is_none())
    }

    /// `|B_n(X_Ω^(l))| = ∏_{i ∈ A_{l,n}} |B_{chain(i,n)}(Ω)|`.
    pub fn count_blocks(&self, n: u64) -> Result<BigUint, MultError> {
        let mut total = BigUint::one();
        let mut cache: BTreeMap<u64, BigUint> = BTreeMap::new();
        for i in a_set(self.base, n) {
            let c = chain_len(i, self.base, n);
            if let Entry::Vacant(e) = cache.entry(c) {
                e.insert(self.omega.count_blocks(c as usize)?);
            }
            total *= &cache[&c];
        }
        Ok(total)
    }

    /// Every admissible block on `[1, n]`, sorted, as a product of per-class
    /// admissible words.
    pub fn enumerate_blocks(&self, n: u64) -> Result<Vec<Word>, MultError> {
        let count = self.count_blocks(n)?;
        let limit = BigUint::from(ENUMERATION_LIMIT);
        if count > limit {
            return Err(ShiftError::TooLarge(u128::try_from(&count).unwrap_or(u128::MAX)).into());
        }
        let reps = a_set(self.base, n);
        let mut choices: Vec<Vec<Word>> = Vec::with_capacity(reps.len());
        for &i in &reps {
            let c = chain_len(i, self.base, n);
            choices.push(self.omega.blocks(c as usize)?);
        }
        if choices.iter().any(Vec::is_empty) {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; reps.len()];
        loop {
            let mut block = vec![0; n as usize];
            for (slot, &i) in reps.iter().enumerate() {
                let w = &choices[slot][idx[slot]];
                let mut pos = i;
                for &s in w.symbols() {
                    block[(pos - 1) as usize] = s;
                    pos *= self.base;
                }
            }
            out.push(Word::new(block));
            // odometer
            let mut slot = reps.len();
            loop {
                if slot == 0 {
                    out.sort();
                    return Ok(out);
                }
                slot -= 1;
                idx[slot] += 1;
                if idx[slot] < choices[slot].len() {
                    break;
                }
                idx[slot] = 0;
            }
        }
    }

    /// The block on `[1, n]` whose every fiber is the least admissible word.
    pub fn least_block(&self, n: u64) -> Result<Word, MultError> {
        let mut fibers = BTreeMap::new();
        for i in a_set(self.base, n) {
            let len = chain_len(i, self.base, n) as usize;
            let w = self
                .omega
                .least_word(len)?
                .ok_or_else(|| ShiftError::Inadmissible(format!("no word of length {len}")))?;
            fibers.insert(i, w);
        }
        self.assemble(&fibers, n)
    }

    /// Builds the block on `[1, length]` whose fiber along `Λ_i` is the given
    /// `Ω`-word prefix for each representative `i <= length`.
    pub fn assemble(&self, fibers: &BTreeMap<u64, Word>, length: u64) -> Result<Word, MultError> {
        for &i in fibers.keys() {
            self.check_rep(i)?;
        }
        let mut block = vec![0; length as usize];
        for i in a_set(self.base, length) {
            let need = chain_len(i, self.base, length);
            let w = fibers.get(&i).ok_or(MultError::MissingFiber(i))?;
            if (w.len() as u64) < need {
                return Err(MultError::FiberTooShort {
                    class: i,
                    needed: need,
                    got: w.len() as u64,
                });
            }
            let mut pos = i;
            for &s in &w.symbols()[..need as usize] {
                block[(pos - 1) as usize] = s;
                pos *= self.base;
            }
        }
        Ok(Word::new(block))
    }

    /// `y|_{Λ_i}` read from depth `start_depth` onward, as a contiguous word.
    /// Every chain position up to `|y|` must lie in the support of `y`.
    pub fn extract_fiber(&self, y: &Pattern, i: u64, start_depth: u64) -> Result<Word, MultError> {
        self.check_rep(i)?;
        let n = chain_len(i, self.base, y.len());
        let mut out = Vec::new();
        let mut pos = i as u128;
        for depth in 1..=n {
            if depth >= start_depth.max(1) {
                let p = pos as u64;
                let s = y
                    .get(p)
                    .ok_or(MultError::ChainExitsCoverage { class: i, position: p })?;
                out.push(s);
            }
            pos *= self.base as u128;
        }
        Ok(Word::new(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gm(l: u64) -> MultShift {
        MultShift::new(ShiftSpec::sft(2, &["11"]).unwrap(), l).unwrap()
    }

    fn block(s: &str) -> Pattern {
        Pattern::block(&s.parse().unwrap())
    }

    fn render(p: &[Option<Symbol>]) -> String {
        p.iter().map(|s| s.map_or('.', |s| (b'0' + s) as char)).collect()
    }

    #[test]
    fn fiber_examples() {
        let x = gm(2);
        let u = block("1110010000010000");
        assert_eq!(render(&x.fiber(&u, 3).unwrap()), "111");
        assert_eq!(render(&x.fiber(&u, 1).unwrap()), "11000");
        let single = Pattern::from_entries([(5, 0)]).unwrap();
        assert_eq!(render(&x.fiber(&single, 5).unwrap()), "0");
        assert!(x.fiber(&u, 2).is_err());
    }

    #[test]
    fn pi_examples() {
        let s: BTreeSet<u64> = (1..=8).collect();
        let q: Vec<u64> = pi_positions(96, &s).unwrap().into_iter().collect();
        assert_eq!(q, [96, 192, 288, 384, 480, 576, 672, 768]);
        assert_eq!(pi_positions(1, &s).unwrap(), s);
        let s: BTreeSet<u64> = [1, 3].into_iter().collect();
        assert_eq!(pi_positions(4, &s).unwrap().into_iter().collect::<Vec<_>>(), [4, 12]);
    }

    #[test]
    fn admissibility_examples() {
        let x = gm(2);
        assert!(!x.is_admissible(&block("11")).unwrap());
        let u = Pattern::from_entries([(1, 1), (3, 1)]).unwrap();
        assert!(x.is_admissible(&u).unwrap());

        let f = MultShift::new(ShiftSpec::sft(2, &["01", "11"]).unwrap(), 4).unwrap();
        assert!(!f.is_admissible(&block("111111")).unwrap());
        assert_eq!(f.first_violation(&block("111111")).unwrap(), Some(1));
    }

    #[test]
    fn enumeration_and_counting() {
        let x = gm(2);
        let b2: Vec<String> = x.enumerate_blocks(2).unwrap().iter().map(Word::to_string).collect();
        assert_eq!(b2, ["00", "01", "10"]);
        assert_eq!(x.enumerate_blocks(3).unwrap().len(), 6);
        assert_eq!(x.count_blocks(4).unwrap(), BigUint::from(10u32));
        assert_eq!(x.count_blocks(2).unwrap(), BigUint::from(3u32));

        let full = MultShift::new(ShiftSpec::sft(2, &[]).unwrap(), 2).unwrap();
        assert_eq!(full.enumerate_blocks(4).unwrap().len(), 16);
        for n in 1..12 {
            assert_eq!(full.count_blocks(n).unwrap(), BigUint::from(1u32) << n);
        }
    }

    #[test]
    fn assemble_examples() {
        let x = gm(2);
        let fibers: BTreeMap<u64, Word> = [(1, "010".parse().unwrap()), (3, "1".parse().unwrap())].into();
        assert_eq!(x.assemble(&fibers, 4).unwrap().to_string(), "0110");
        let zeros: BTreeMap<u64, Word> = [1, 3, 5, 7].into_iter().map(|i| (i, Word::repeat(0, 4))).collect();
        assert_eq!(x.assemble(&zeros, 8).unwrap(), Word::repeat(0, 8));
        let missing: BTreeMap<u64, Word> = [(1, "010".parse().unwrap())].into();
        assert_eq!(x.assemble(&missing, 4), Err(MultError::MissingFiber(3)));
        let short: BTreeMap<u64, Word> = [(1, "01".parse().unwrap()), (3, "1".parse().unwrap())].into();
        assert!(matches!(
            x.assemble(&short, 4),
            Err(MultError::FiberTooShort { class: 1, .. })
        ));
    }

    #[test]
    fn pattern_literals() {
        let (l, p) = parse_pattern_literal("l=2;support=1,2,4;values=1,1,0").unwrap();
        assert_eq!(l, Some(2));
        assert_eq!(p.len(), 4);
        assert!(!p.is_block());
        assert_eq!(p.to_string(), "support=1,2,4;values=1,1,0");
        let b: Pattern = "block:1100".parse().unwrap();
        assert_eq!(b.to_string(), "block:1100");
        assert!("support=1,2;values=1".parse::<Pattern>().is_err());
        assert!("support=1,1;values=0,1".parse::<Pattern>().is_err());
    }

    #[test]
    fn scale_places_positions() {
        // Q = 4·1·2^2 = 16 for l = 2.
        let s = Scale::new(2, 4, 1, 2, 2).unwrap();
        assert_eq!(s, Scale { factor: 1, exp: 4 });
        assert_eq!(s.place(3, 2).unwrap(), (3, 5));
        // Q = 8·243 in base 6: 243 is coprime to 6, 8 = 8·6^0.
        let s = Scale::new(6, 8, 243, 6, 0).unwrap();
        assert_eq!(s.value(6), BigUint::from(1944u32));
    }

    #[test]
    fn extract_fiber_reads_chain() {
        let x = gm(2);
        assert_eq!(x.extract_fiber(&block("0110"), 3, 1).unwrap().to_string(), "1");
        assert_eq!(x.extract_fiber(&block("0110"), 1, 2).unwrap().to_string(), "10");
        let gap = Pattern::from_entries([(1, 0), (4, 1)]).unwrap();
        assert!(matches!(
            x.extract_fiber(&gap, 1, 1),
            Err(MultError::ChainExitsCoverage { class: 1, position: 2 })
        ));
    }
}
