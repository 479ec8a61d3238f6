//! Exact decisions on finite constraint sets, certificate verification and
//! bounded probing of `X_Ω^(l)`.
//!
//! Fixing `(α, k)` turns a connection claim into finitely many constraints.
//! Because the `Λ`-classes are independent copies of `Ω`, the claim holds iff
//! every class's constraints are realizable in `Ω`, which the base shift
//! decides exactly. Only the quantifiers over `α` and `k` need budgets.

mod campaign;
mod obstruction;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ArithError, MultError, ParseError, ShiftError, VerifyError, WitnessError};
use crate::lambda::a_set;
use crate::mult::{MultShift, MultiplierConstraintSet, Pattern, Scale};
use crate::shift::{Constraints, ShiftSpec};
use crate::witness::{certify, check_patterns, ClassConstraint, Construction, WitnessCertificate};

pub use campaign::{
    campaign, dedup_family, default_family, render_table, seeded_random_family, small_sft_family, CampaignConfig,
    CampaignReport, CampaignRow, CheckStatus, Contradiction, EquivalenceCheck, Implication, OmegaProperties, TableCell,
    XProperty,
};
pub use obstruction::{directional_obstruction, ClassResidues, Obstruction};

/// Bounds for the existential searches over `α`, `k` and pattern lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchBudget {
    pub alpha_bound: u64,
    pub k_bound: u64,
    pub pair_length_bound: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            alpha_bound: 9,
            k_bound: 8,
            pair_length_bound: 4,
        }
    }
}

impl fmt::Display for SearchBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha={},k={},len={}",
            self.alpha_bound, self.k_bound, self.pair_length_bound
        )
    }
}

/// Parses `alpha=9,k=8,len=4`; omitted fields keep their defaults.
impl FromStr for SearchBudget {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut b = SearchBudget::default();
        for field in s.split(',').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, val) = field
                .split_once('=')
                .ok_or_else(|| ParseError::new(format!("expected key=value in budget, got {field:?}")))?;
            let val: u64 = val
                .trim()
                .parse()
                .map_err(|_| ParseError::new(format!("budget field {key} needs a number")))?;
            if val == 0 {
                return Err(ParseError::new(format!("budget field {key} must be positive")));
            }
            match key.trim() {
                "alpha" => b.alpha_bound = val,
                "k" => b.k_bound = val,
                "len" => b.pair_length_bound = val,
                other => return Err(ParseError::new(format!("unknown budget field {other:?}"))),
            }
        }
        Ok(b)
    }
}

/// Outcome of a bounded existential probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// A witness was found inside the budget.
    Witnessed,
    /// No witness exists for any parameter, by an exact invariant.
    Refuted,
    /// No witness inside the budget, and no proof that none exists.
    Inconclusive,
}

/// Whether `(α, q, k)` admits a witness, without building one.
pub fn realizable(ms: &MultShift, u: &Pattern, v: &Pattern, alpha: u64, q: u64, k: u64) -> Result<bool, WitnessError> {
    let scale = Scale::new(ms.base(), u.len(), alpha, q, k)?;
    let set = match MultiplierConstraintSet::build(u, v, scale, ms.base()) {
        Ok(set) => set,
        Err(MultError::Shift(ShiftError::ContradictoryConstraint { .. })) => return Ok(false),
        Err(e) => return Err(e.into()),
    };
    for c in set.groups.values() {
        if !ms.omega().partial_extendable(c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact decision of `∃x: x|_{s(u)} = u, (Π_{|u|αl^k} x)|_{s(v)} = v`.
pub fn exists_witness_exact(
    ms: &MultShift,
    u: &Pattern,
    v: &Pattern,
    alpha: u64,
    k: u64,
) -> Result<Option<WitnessCertificate>, WitnessError> {
    exists_witness_scaled(ms, u, v, alpha, ms.base(), k)
}

/// As [`exists_witness_exact`] for `Q = |u|·α·q^k` with `α ∈ A_q`.
pub fn exists_witness_scaled(
    ms: &MultShift,
    u: &Pattern,
    v: &Pattern,
    alpha: u64,
    q: u64,
    k: u64,
) -> Result<Option<WitnessCertificate>, WitnessError> {
    if alpha == 0 || alpha % q == 0 {
        return Err(ArithError::DivisibleByBase { value: alpha, base: q }.into());
    }
    check_patterns(ms, u, v)?;
    let cert = certify(ms, u, v, alpha, q, k, Construction::ExactSearch)?;
    if let Some(c) = &cert {
        verify(ms.omega(), c).map_err(|e| WitnessError::SelfCheck(e.to_string()))?;
    }
    Ok(cert)
}

/// `n = rep · l^(depth-1)` with `l ∤ rep`, in arbitrary precision.
fn chain_coordinates(n: &BigUint, l: u64) -> Result<(u64, u64), ArithError> {
    if n.is_zero() {
        return Err(ArithError::Zero);
    }
    let lb = BigUint::from(l);
    let mut rep = n.clone();
    let mut depth = 1;
    while (&rep % &lb).is_zero() {
        rep /= &lb;
        depth += 1;
    }
    Ok((rep.to_u64().ok_or(ArithError::Overflow)?, depth))
}

/// Re-checks a certificate from scratch: the multiplier, every constraint
/// against the stored fibers, and membership of every fiber in `B(Ω)`.
pub fn verify(omega: &ShiftSpec, cert: &WitnessCertificate) -> Result<(), VerifyError> {
    let l = cert.base;
    if l < 2 {
        return Err(ArithError::BaseTooSmall(l).into());
    }
    if cert.alpha == 0 || cert.alpha % cert.direction == 0 {
        return Err(VerifyError::Alpha {
            alpha: cert.alpha,
            base: cert.direction,
        });
    }
    let stated = cert.multiplier_value()?;
    let k = u32::try_from(cert.k).map_err(|_| ArithError::Overflow)?;
    let actual = BigUint::from(cert.u.len()) * BigUint::from(cert.alpha) * BigUint::from(cert.direction).pow(k);
    if stated != actual {
        return Err(VerifyError::Multiplier {
            stated: cert.multiplier.clone(),
            actual: actual.to_string(),
        });
    }
    for (&class, w) in &cert.fibers {
        if class == 0 || class % l == 0 {
            return Err(VerifyError::NotRepresentative(class));
        }
        if !omega.is_block(w)? {
            return Err(VerifyError::Fiber {
                class,
                word: w.to_string(),
            });
        }
    }
    let mut recomputed = Vec::new();
    let mut check = |position: BigUint, symbol, origin| -> Result<(), VerifyError> {
        let (class, depth) = chain_coordinates(&position, l)?;
        let found = cert.fibers.get(&class).and_then(|w| w.at(depth as usize));
        if found != Some(symbol) {
            return Err(VerifyError::Constraint {
                class,
                depth,
                expected: symbol,
                found,
            });
        }
        recomputed.push(ClassConstraint {
            class,
            depth,
            symbol,
            origin,
        });
        Ok(())
    };
    for (p, s) in cert.u.entries() {
        check(BigUint::from(p), s, crate::mult::Origin::U)?;
    }
    for (p, s) in cert.v.entries() {
        check(&actual * BigUint::from(p), s, crate::mult::Origin::V)?;
    }
    recomputed.sort();
    if recomputed != cert.constraints {
        return Err(VerifyError::ConstraintList);
    }
    Ok(())
}

/// Every admissible block of `X_Ω^(l)` with length in `1..=max_len`,
/// shortest first.
pub fn admissible_blocks(ms: &MultShift, max_len: u64) -> Result<Vec<Pattern>, MultError> {
    let mut out = Vec::new();
    for n in 1..=max_len {
        out.extend(ms.enumerate_blocks(n)?.iter().map(Pattern::block));
    }
    Ok(out)
}

/// Result of [`probe_transitive_x`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitiveProbe {
    pub budget: SearchBudget,
    pub verdict: Verdict,
    pub pairs: usize,
    pub witnessed: usize,
    /// Pairs without a witness inside the budget.
    pub unwitnessed: Vec<(Pattern, Pattern)>,
}

/// First `(α, k)` in the budget (α outer, both ascending) connecting `u` to `v`.
pub fn find_transitive_pair(
    ms: &MultShift,
    u: &Pattern,
    v: &Pattern,
    budget: &SearchBudget,
) -> Result<Option<(u64, u64)>, WitnessError> {
    for alpha in a_set(ms.base(), budget.alpha_bound) {
        for k in 0..=budget.k_bound {
            if realizable(ms, u, v, alpha, ms.base(), k)? {
                return Ok(Some((alpha, k)));
            }
        }
    }
    Ok(None)
}

/// Bounded check of transitivity of `X_Ω^(l)` over all block pairs up to
/// the budget's length.
pub fn probe_transitive_x(ms: &MultShift, budget: &SearchBudget) -> Result<TransitiveProbe, WitnessError> {
    let blocks = admissible_blocks(ms, budget.pair_length_bound)?;
    let mut witnessed = 0;
    let mut unwitnessed = Vec::new();
    for u in &blocks {
        for v in &blocks {
            if find_transitive_pair(ms, u, v, budget)?.is_some() {
                witnessed += 1;
            } else {
                unwitnessed.push((u.clone(), v.clone()));
            }
        }
    }
    let pairs = blocks.len() * blocks.len();
    Ok(TransitiveProbe {
        budget: *budget,
        verdict: if unwitnessed.is_empty() {
            Verdict::Witnessed
        } else {
            Verdict::Inconclusive
        },
        pairs,
        witnessed,
        unwitnessed,
    })
}

/// The multipliers of one depth `k` that failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthFailure {
    pub k: u64,
    pub failing_alphas: Vec<u64>,
}

/// Result of [`probe_directional_q`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionalProbe {
    pub direction: u64,
    pub budget: SearchBudget,
    pub verdict: Verdict,
    /// The first `k` that worked for every `α` in the budget.
    pub k: Option<u64>,
    pub failures: Vec<DepthFailure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<Obstruction>,
}

/// Searches `k <= k_bound` such that every `α ∈ A_q ∩ [1, alpha_bound]`
/// admits a witness. When none does and `q` is a power of `l` over an SFT,
/// tries to prove that no `k` at all works.
pub fn probe_directional_q(
    ms: &MultShift,
    q: u64,
    u: &Pattern,
    v: &Pattern,
    budget: &SearchBudget,
) -> Result<DirectionalProbe, WitnessError> {
    if q < 2 {
        return Err(ArithError::BaseTooSmall(q).into());
    }
    check_patterns(ms, u, v)?;
    let alphas = a_set(q, budget.alpha_bound);
    let mut failures = Vec::new();
    for k in 0..=budget.k_bound {
        let mut failing = Vec::new();
        for &alpha in &alphas {
            if !realizable(ms, u, v, alpha, q, k)? {
                failing.push(alpha);
            }
        }
        if failing.is_empty() {
            return Ok(DirectionalProbe {
                direction: q,
                budget: *budget,
                verdict: Verdict::Witnessed,
                k: Some(k),
                failures,
                obstruction: None,
            });
        }
        failures.push(DepthFailure {
            k,
            failing_alphas: failing,
        });
    }
    let obstruction = match crate::witness::power_of(q, ms.base()) {
        Some(n) => directional_obstruction(ms, n, u, v, &alphas)?,
        None => None,
    };
    let verdict = if obstruction.as_ref().is_some_and(|o| o.proved) {
        Verdict::Refuted
    } else {
        Verdict::Inconclusive
    };
    Ok(DirectionalProbe {
        direction: q,
        budget: *budget,
        verdict,
        k: None,
        failures,
        obstruction,
    })
}

/// Constraints of one class for `(α, q, k)`, or `None` if `u` and the scaled
/// `v` collide on a cell.
pub(crate) fn class_constraints(
    ms: &MultShift,
    u: &Pattern,
    v: &Pattern,
    alpha: u64,
    q: u64,
    k: u64,
) -> Result<Vec<(u64, Option<Constraints>)>, WitnessError> {
    let l = ms.base();
    let scale = Scale::new(l, u.len(), alpha, q, k)?;
    let mut groups: std::collections::BTreeMap<u64, Option<Constraints>> = Default::default();
    let mut add = |rep: u64, depth: u64, s| {
        let slot = groups.entry(rep).or_insert_with(|| Some(Constraints::new()));
        if let Some(c) = slot {
            if c.insert(depth, s).is_err() {
                *slot = None;
            }
        }
    };
    for (p, s) in u.entries() {
        let d = crate::lambda::decompose(p, l)?;
        add(d.alpha, d.k + 1, s);
    }
    for (p, s) in v.entries() {
        let (rep, depth) = scale.place(p, l)?;
        add(rep, depth, s);
    }
    Ok(groups.into_iter().collect())
}
