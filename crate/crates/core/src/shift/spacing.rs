//! Spacing shifts: 0/1 sequences whose 1s are pairwise separated by gaps in
//! a set `P` containing 0.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::ShiftError;
use crate::word::{Symbol, Word};

/// Default tabulation horizon for spacing specs.
pub const DEFAULT_HORIZON: u64 = 100_000;

/// Declared class of the gap set. Weak mixing of a spacing shift cannot be
/// decided from a membership oracle, so the declaration is trusted after a
/// prefix consistency check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpacingClass {
    Cofinite,
    Thick,
    General,
}

/// How membership in the gap set is computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GapSet {
    /// Every nonnegative integer except the listed ones.
    Cofinite { complement: BTreeSet<u64> },
    /// Every nonnegative integer except `offset + base^n` for `n >= 0`.
    /// The complement is infinite but increasingly sparse, so the set is thick.
    PowerComplement { offset: u64, base: u64 },
    /// Exactly the listed integers; membership is known only up to the horizon.
    Explicit { members: BTreeSet<u64> },
}

impl GapSet {
    fn contains(&self, gap: u64) -> bool {
        match self {
            GapSet::Cofinite { complement } => !complement.contains(&gap),
            GapSet::PowerComplement { offset, base } => {
                if gap <= *offset {
                    return true;
                }
                let mut t = gap - offset;
                while t % base == 0 {
                    t /= base;
                }
                t != 1
            }
            GapSet::Explicit { members } => members.contains(&gap),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpacingSpec {
    gaps: GapSet,
    class: SpacingClass,
    horizon: u64,
}

impl SpacingSpec {
    pub fn new(gaps: GapSet, class: SpacingClass, horizon: u64) -> Result<Self, ShiftError> {
        let spec = SpacingSpec { gaps, class, horizon };
        spec.validate()?;
        Ok(spec)
    }

    /// `P = N_0 \ complement`, declared cofinite.
    pub fn cofinite(complement: impl IntoIterator<Item = u64>) -> Result<Self, ShiftError> {
        Self::new(
            GapSet::Cofinite {
                complement: complement.into_iter().collect(),
            },
            SpacingClass::Cofinite,
            DEFAULT_HORIZON,
        )
    }

    /// `P = N_0 \ {offset + base^n : n >= 0}`, declared thick.
    pub fn power_complement(offset: u64, base: u64) -> Result<Self, ShiftError> {
        Self::new(
            GapSet::PowerComplement { offset, base },
            SpacingClass::Thick,
            DEFAULT_HORIZON,
        )
    }

    fn validate(&self) -> Result<(), ShiftError> {
        if self.horizon == 0 {
            return Err(ShiftError::InvalidSpec("horizon must be positive".into()));
        }
        if !self.gaps.contains(0) {
            return Err(ShiftError::InvalidSpec("gap set must contain 0".into()));
        }
        match (&self.gaps, self.class) {
            (_, SpacingClass::General) => Ok(()),
            (GapSet::Cofinite { .. }, _) => Ok(()),
            (GapSet::PowerComplement { base, .. }, SpacingClass::Thick) => {
                if *base < 2 {
                    Err(ShiftError::InvalidSpec(
                        "power complement needs base >= 2 to be thick".into(),
                    ))
                } else {
                    Ok(())
                }
            }
            (GapSet::PowerComplement { .. }, SpacingClass::Cofinite) => Err(ShiftError::InvalidSpec(
                "a power complement is infinite, so the gap set is not cofinite".into(),
            )),
            (GapSet::Explicit { .. }, c) => Err(ShiftError::InvalidSpec(format!(
                "an explicit member list cannot certify class {c:?}; declare it general"
            ))),
        }
    }

    pub fn gaps(&self) -> &GapSet {
        &self.gaps
    }

    pub fn class(&self) -> SpacingClass {
        self.class
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// Membership of `gap` in `P`, valid up to the horizon.
    pub fn allows_gap(&self, gap: u64) -> Result<bool, ShiftError> {
        if gap > self.horizon {
            return Err(ShiftError::HorizonExceeded {
                position: gap,
                horizon: self.horizon,
            });
        }
        Ok(self.gaps.contains(gap))
    }

    /// Largest excluded gap of a cofinite set, 0 if nothing is excluded.
    pub fn max_excluded(&self) -> Option<u64> {
        match &self.gaps {
            GapSet::Cofinite { complement } => Some(complement.iter().copied().max().unwrap_or(0)),
            _ => None,
        }
    }

    pub(crate) fn check_position(&self, p: u64) -> Result<(), ShiftError> {
        if p > self.horizon {
            Err(ShiftError::HorizonExceeded {
                position: p,
                horizon: self.horizon,
            })
        } else {
            Ok(())
        }
    }

    /// Constrained ones must be pairwise compatible; zeros everywhere else is
    /// always a valid completion since only gaps between ones are constrained.
    pub(crate) fn ones_compatible(&self, ones: &[u64]) -> Result<bool, ShiftError> {
        for (i, &a) in ones.iter().enumerate() {
            for &b in &ones[i + 1..] {
                if !self.allows_gap(a.abs_diff(b))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Admissible words of length `n`, sorted.
    pub(crate) fn words(&self, n: usize) -> Result<Vec<Word>, ShiftError> {
        self.check_position(n as u64)?;
        let mut out = Vec::new();
        let mut stack: Vec<(Vec<Symbol>, Vec<u64>)> = vec![(Vec::new(), Vec::new())];
        while let Some((w, ones)) = stack.pop() {
            if w.len() == n {
                out.push(Word::new(w));
                continue;
            }
            let pos = w.len() as u64 + 1;
            let mut with_one = true;
            for &o in &ones {
                if !self.gaps.contains(pos - o) {
                    with_one = false;
                    break;
                }
            }
            if with_one {
                let mut w1 = w.clone();
                w1.push(1);
                let mut o1 = ones.clone();
                o1.push(pos);
                stack.push((w1, o1));
            }
            let mut w0 = w;
            w0.push(0);
            stack.push((w0, ones));
        }
        Ok(out)
    }
}
