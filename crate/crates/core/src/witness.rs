//! Constructive witnesses for connection claims in `X_Ω^(l)`.
//!
//! A certificate proves that some `x ∈ X_Ω^(l)` has `x|_{s(u)} = u` and
//! `(Π_Q x)|_{s(v)} = v` for `Q = |u|·α·q^k`. It records one `Ω`-word per
//! touched class; unconstrained classes can be filled by any `Ω`-point, so the
//! fibers determine a full point prefix (see [`WitnessCertificate::materialize`]).

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{ArithError, MultError, ShiftError, VerifyError, WitnessError};
use crate::lambda::{a_set, chain_len, decompose, is_prime, pair_offset_bound, prime_factors, xi};
use crate::mult::{MultShift, MultiplierConstraintSet, Origin, Pattern, Scale};
use crate::shift::{Constraints, Property, ShiftSpec};
use crate::word::{Symbol, Word};

/// How many candidate starts the power construction tries before giving up.
pub const CONNECTOR_SEARCH: u64 = 512;

/// Which construction produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// `α` a prime above `ξ(u)`, so scaled `v`-fibers land in fresh classes.
    PrimeMultiplier,
    /// Direction `q` with a prime `p ∤ l`; `p^k > ξ(u)` separates the classes.
    CoprimeDirection,
    /// Direction `l^n`; fiber pairs joined at a common aligned start.
    PowerDirection,
    /// Multiplier above the mixing threshold `l^N`.
    MixingThreshold,
    /// Exact decision for one fixed `(α, k)`.
    ExactSearch,
}

/// One constrained cell of a certificate, in chain coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassConstraint {
    pub class: u64,
    pub depth: u64,
    pub symbol: Symbol,
    pub origin: Origin,
}

/// One connected fiber pair of the power construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaPair {
    /// Class of the left fiber, `None` for a class untouched by `u`.
    pub left_class: Option<u64>,
    pub right_class: u64,
    /// Depth offset `r`: the right fiber is preceded by a connector of length `r`.
    pub offset: u64,
    /// Left fiber as a partial word (`.` for an unconstrained cell).
    pub left: String,
    /// Connector followed by the right fiber.
    pub right: String,
}

/// Finite set of fiber pairs covering every class/offset combination that a
/// multiplier `|u|·α·l^(nk)` can produce, together with the common start.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaSet {
    pub power: u64,
    pub max_offset: u64,
    /// Every right word begins at depth `start + 1`.
    pub start: u64,
    pub pairs: Vec<DeltaPair>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub base: u64,
    /// The `q` of `Q = |u|·α·q^k`; equals `base` except for directional claims.
    pub direction: u64,
    pub u: Pattern,
    pub v: Pattern,
    pub alpha: u64,
    pub k: u64,
    /// Decimal `Q`.
    pub multiplier: String,
    pub constraints: Vec<ClassConstraint>,
    /// One admissible `Ω`-word per constrained class, covering every
    /// constrained depth of that class.
    pub fibers: BTreeMap<u64, Word>,
    pub construction: Construction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<DeltaSet>,
}

impl WitnessCertificate {
    pub fn multiplier_value(&self) -> Result<BigUint, VerifyError> {
        self.multiplier.parse().map_err(|_| VerifyError::Multiplier {
            stated: self.multiplier.clone(),
            actual: "unparseable".into(),
        })
    }

    /// Largest constrained position of the witness point.
    pub fn extent(&self) -> BigUint {
        let l = BigUint::from(self.base);
        self.constraints
            .iter()
            .map(|c| BigUint::from(c.class) * l.pow((c.depth - 1) as u32))
            .max()
            .unwrap_or_default()
    }

    /// The witness point on `[1, extent]`, with every unconstrained class
    /// filled by the least admissible word. Fails if the extent exceeds `limit`.
    pub fn materialize(&self, omega: &ShiftSpec, limit: u64) -> Result<Word, MultError> {
        let extent = self.extent();
        let len = u64::try_from(&extent)
            .ok()
            .filter(|&n| n <= limit)
            .ok_or_else(|| ShiftError::TooLarge(u128::try_from(&extent).unwrap_or(u128::MAX)))?;
        let ms = MultShift::new(omega.clone(), self.base)?;
        let mut fibers = BTreeMap::new();
        for i in a_set(self.base, len) {
            let need = chain_len(i, self.base, len) as usize;
            let base = self
                .fibers
                .get(&i)
                .map(|w| Constraints::word_at(w, 1))
                .unwrap_or_default();
            let w = omega
                .least_completion(&base, need)?
                .ok_or_else(|| ShiftError::Inadmissible(format!("fiber of class {i}")))?;
            fibers.insert(i, w);
        }
        ms.assemble(&fibers, len)
    }
}

/// Renders constraints as a partial word, `.` marking free cells.
pub fn render_partial(c: &Constraints) -> String {
    let n = c.max_position().unwrap_or(0);
    (1..=n).map(|p| c.get(p).map_or('.', |s| (b'0' + s) as char)).collect()
}

pub(crate) fn check_patterns(ms: &MultShift, u: &Pattern, v: &Pattern) -> Result<(), WitnessError> {
    for (which, p) in [("u", u), ("v", v)] {
        if p.is_empty() {
            return Err(ShiftError::InvalidSpec(format!("pattern {which} is empty")).into());
        }
        if let Some(class) = ms.first_violation(p)? {
            return Err(WitnessError::InadmissiblePattern { which, class });
        }
    }
    Ok(())
}

fn require(ms: &MultShift, property: Property) -> Result<(), WitnessError> {
    if ms.omega().decide(property)?.value {
        Ok(())
    } else {
        Err(WitnessError::MissingProperty(property))
    }
}

/// Decides the constraint set of `(α, q, k)` exactly and, when realizable,
/// returns the certificate built from the least completion of every class.
pub(crate) fn certify(
    ms: &MultShift,
    u: &Pattern,
    v: &Pattern,
    alpha: u64,
    q: u64,
    k: u64,
    construction: Construction,
) -> Result<Option<WitnessCertificate>, WitnessError> {
    let l = ms.base();
    let scale = Scale::new(l, u.len(), alpha, q, k)?;
    let set = match MultiplierConstraintSet::build(u, v, scale, l) {
        Ok(set) => set,
        Err(MultError::Shift(ShiftError::ContradictoryConstraint { .. })) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let mut fibers = BTreeMap::new();
    for (&rep, c) in &set.groups {
        let depth = c.max_position().unwrap_or(0) as usize;
        match ms.omega().least_completion(c, depth)? {
            Some(w) => fibers.insert(rep, w),
            None => return Ok(None),
        };
    }
    let mut constraints = Vec::with_capacity(u.entries().count() + v.entries().count());
    for (p, symbol) in u.entries() {
        let d = decompose(p, l)?;
        constraints.push(ClassConstraint {
            class: d.alpha,
            depth: d.k + 1,
            symbol,
            origin: Origin::U,
        });
    }
    for (p, symbol) in v.entries() {
        let (class, depth) = scale.place(p, l)?;
        constraints.push(ClassConstraint {
            class,
            depth,
            symbol,
            origin: Origin::V,
        });
    }
    constraints.sort();
    Ok(Some(WitnessCertificate {
        base: l,
        direction: q,
        u: u.clone(),
        v: v.clone(),
        alpha,
        k,
        multiplier: scale.value(l).to_string(),
        constraints,
        fibers,
        construction,
        delta: None,
    }))
}

fn certify_checked(
    ms: &MultShift,
    u: &Pattern,
    v: &Pattern,
    alpha: u64,
    q: u64,
    k: u64,
    construction: Construction,
) -> Result<WitnessCertificate, WitnessError> {
    let cert = certify(ms, u, v, alpha, q, k, construction)?.ok_or_else(|| {
        WitnessError::SelfCheck(format!(
            "constraints for alpha={alpha}, q={q}, k={k} are not realizable"
        ))
    })?;
    crate::oracle::verify(ms.omega(), &cert).map_err(|e| WitnessError::SelfCheck(e.to_string()))?;
    Ok(cert)
}

/// Least prime above `ξ(|u|)` that does not divide `l`.
pub fn transitive_multiplier(u_len: u64, l: u64) -> u64 {
    (xi(u_len, l) + 1..)
        .find(|&p| is_prime(p) && l % p != 0)
        .expect("primes are unbounded")
}

/// Connects `u` to `v` at depth `k` with a prime multiplier, for an
/// extensible base shift.
pub fn witness_transitive(
    ms: &MultShift,
    u: &Pattern,
    v: &Pattern,
    k: u64,
) -> Result<WitnessCertificate, WitnessError> {
    require(ms, Property::Extensible)?;
    check_patterns(ms, u, v)?;
    let alpha = transitive_multiplier(u.len(), ms.base());
    certify_checked(ms, u, v, alpha, ms.base(), k, Construction::PrimeMultiplier)
}

/// `q`-directional witness for a direction with a prime factor `p ∤ l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoprimeWitness {
    pub direction: u64,
    pub prime: u64,
    pub k: u64,
    pub u: Pattern,
    pub v: Pattern,
}

impl CoprimeWitness {
    pub fn certificate(&self, ms: &MultShift, alpha: u64) -> Result<WitnessCertificate, WitnessError> {
        if alpha == 0 || alpha % self.direction == 0 {
            return Err(ArithError::DivisibleByBase {
                value: alpha,
                base: self.direction,
            }
            .into());
        }
        certify_checked(
            ms,
            &self.u,
            &self.v,
            alpha,
            self.direction,
            self.k,
            Construction::CoprimeDirection,
        )
    }
}

pub fn witness_directional_coprime(
    ms: &MultShift,
    q: u64,
    u: &Pattern,
    v: &Pattern,
) -> Result<CoprimeWitness, WitnessError> {
    let l = ms.base();
    let p = prime_factors(q)
        .into_iter()
        .map(|(p, _)| p)
        .find(|&p| l % p != 0)
        .ok_or(WitnessError::NoCoprimePrime { q, l })?;
    require(ms, Property::Extensible)?;
    check_patterns(ms, u, v)?;
    let bound = xi(u.len(), l);
    let mut k = 0;
    let mut pk: u128 = 1;
    while pk <= bound as u128 {
        pk *= p as u128;
        k += 1;
    }
    Ok(CoprimeWitness {
        direction: q,
        prime: p,
        k,
        u: u.clone(),
        v: v.clone(),
    })
}

/// `l^n`-directional witness: one `k` for every `α ∈ A_{l^n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerWitness {
    pub power: u64,
    pub direction: u64,
    pub k: u64,
    pub delta: DeltaSet,
    pub certificates: Vec<WitnessCertificate>,
    pub u: Pattern,
    pub v: Pattern,
}

impl PowerWitness {
    pub fn certificate(&self, ms: &MultShift, alpha: u64) -> Result<WitnessCertificate, WitnessError> {
        if alpha == 0 || alpha % self.direction == 0 {
            return Err(ArithError::DivisibleByBase {
                value: alpha,
                base: self.direction,
            }
            .into());
        }
        let mut cert = certify_checked(
            ms,
            &self.u,
            &self.v,
            alpha,
            self.direction,
            self.k,
            Construction::PowerDirection,
        )?;
        cert.delta = Some(self.delta.clone());
        Ok(cert)
    }
}

/// Builds the Δ-set for direction `l^n` and finds the common start.
///
/// For `α = α0·l^e` (`e < n`) and a `v`-class `j`, the scaled fiber
/// `v|_{Λ_j}` lands in the class `J` of `α1·α0·j` at depths starting from
/// `k1 + nk + r + 1` with `r = e + c <= max_offset`. Connecting every
/// `(u|_{Λ_J}, w·v|_{Λ_j})` at one start `K = k1 + nk` therefore covers all
/// `α` at once.
pub fn witness_directional_power(
    ms: &MultShift,
    n: u64,
    u: &Pattern,
    v: &Pattern,
    alpha_bound: u64,
) -> Result<PowerWitness, WitnessError> {
    let l = ms.base();
    if n == 0 {
        return Err(ArithError::Zero.into());
    }
    let q = u32::try_from(n)
        .ok()
        .and_then(|n| l.checked_pow(n))
        .ok_or(ArithError::Overflow)?;
    require(ms, Property::WeaklyMixing)?;
    check_patterns(ms, u, v)?;
    let omega = ms.omega();
    let k1 = decompose(u.len(), l)?.k;
    let max_offset = pair_offset_bound(u.len(), v.len(), l)? + n - 1;

    let u_fibers = ms.fiber_constraints(u)?;
    let v_fibers = ms.fiber_constraints(v)?;
    let mut lefts: Vec<(Option<u64>, Constraints)> = u_fibers.iter().map(|(&i, c)| (Some(i), c.clone())).collect();
    lefts.push((None, Constraints::new()));

    let mut pairs = Vec::new();
    let mut transcript = Vec::new();
    for (&j, vbar) in &v_fibers {
        for r in 0..=max_offset {
            let mut right = Constraints::new();
            right.merge_shifted(vbar, r)?;
            let connector = omega
                .least_completion(&right, r as usize)?
                .ok_or_else(|| WitnessError::SelfCheck(format!("fiber of class {j} cannot follow {r} symbols")))?;
            let mut right = Constraints::word_at(&connector, 1);
            right.merge_shifted(vbar, r)?;
            for (left_class, left) in &lefts {
                transcript.push(DeltaPair {
                    left_class: *left_class,
                    right_class: j,
                    offset: r,
                    left: render_partial(left),
                    right: render_partial(&right),
                });
                pairs.push((left.clone(), right.clone()));
            }
        }
    }

    let longest = lefts.iter().filter_map(|(_, c)| c.max_position()).max().unwrap_or(0);
    let mut start = k1;
    while start < longest {
        start += n;
    }
    let bound = start + n * CONNECTOR_SEARCH;
    let mut found = None;
    while start <= bound {
        if omega.simultaneous_start(&pairs, start, start)?.is_some() {
            found = Some(start);
            break;
        }
        start += n;
    }
    let start = found.ok_or(WitnessError::ConnectorNotFound { bound })?;
    let delta = DeltaSet {
        power: n,
        max_offset,
        start,
        pairs: transcript,
    };
    let mut witness = PowerWitness {
        power: n,
        direction: q,
        k: (start - k1) / n,
        delta,
        certificates: Vec::new(),
        u: u.clone(),
        v: v.clone(),
    };
    let mut certificates = Vec::new();
    for alpha in a_set(q, alpha_bound) {
        certificates.push(witness.certificate(ms, alpha)?);
    }
    witness.certificates = certificates;
    Ok(witness)
}

/// Mixing witness: every multiplier `|u|·α·l^k` with `α·l^k >= l^N` works.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixingWitness {
    pub threshold: u64,
    pub u: Pattern,
    pub v: Pattern,
}

impl MixingWitness {
    /// Whether `α·l^k >= l^N`.
    pub fn admits(&self, alpha: u64, k: u64, l: u64) -> bool {
        k >= self.threshold
            || u32::try_from(self.threshold - k)
                .ok()
                .and_then(|e| l.checked_pow(e))
                .is_some_and(|p| alpha >= p)
    }

    pub fn certificate(&self, ms: &MultShift, alpha: u64, k: u64) -> Result<WitnessCertificate, WitnessError> {
        let l = ms.base();
        if alpha == 0 || alpha % l == 0 {
            return Err(ArithError::DivisibleByBase { value: alpha, base: l }.into());
        }
        if !self.admits(alpha, k, l) {
            return Err(WitnessError::BelowThreshold {
                alpha,
                k,
                l,
                n: self.threshold,
            });
        }
        certify_checked(ms, &self.u, &self.v, alpha, l, k, Construction::MixingThreshold)
    }
}

/// The threshold `N` is the base shift's mixing gap index. A `v`-fiber placed
/// by a multiplier `≥ |u|·l^N` sits at least `N` chain steps past the end of
/// the `u`-fiber sharing its class, so the gap is at least `N - 1`.
pub fn witness_mixing(ms: &MultShift, u: &Pattern, v: &Pattern) -> Result<MixingWitness, WitnessError> {
    check_patterns(ms, u, v)?;
    let longest = chain_len(1, ms.base(), u.len().max(v.len())) as usize;
    let threshold = match ms.omega().mixing_gap_index(longest) {
        Ok(n) => n,
        Err(ShiftError::NotMixing) => return Err(WitnessError::MissingProperty(Property::Mixing)),
        Err(e) => return Err(e.into()),
    };
    Ok(MixingWitness {
        threshold,
        u: u.clone(),
        v: v.clone(),
    })
}

/// A directional witness from whichever construction applies to `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "route", rename_all = "snake_case")]
pub enum DirectionalWitness {
    Coprime(CoprimeWitness),
    Power(PowerWitness),
}

impl DirectionalWitness {
    pub fn k(&self) -> u64 {
        match self {
            DirectionalWitness::Coprime(w) => w.k,
            DirectionalWitness::Power(w) => w.k,
        }
    }

    pub fn certificate(&self, ms: &MultShift, alpha: u64) -> Result<WitnessCertificate, WitnessError> {
        match self {
            DirectionalWitness::Coprime(w) => w.certificate(ms, alpha),
            DirectionalWitness::Power(w) => w.certificate(ms, alpha),
        }
    }
}

/// `l^n` with `n >= 1` if `q` is such a power.
pub fn power_of(q: u64, l: u64) -> Option<u64> {
    let d = decompose(q, l).ok()?;
    (d.alpha == 1 && d.k >= 1).then_some(d.k)
}

/// Coprime route when `q` has a prime factor not dividing `l`, power route
/// when `q` is a power of `l`.
pub fn witness_directional(
    ms: &MultShift,
    q: u64,
    u: &Pattern,
    v: &Pattern,
    alpha_bound: u64,
) -> Result<DirectionalWitness, WitnessError> {
    match witness_directional_coprime(ms, q, u, v) {
        Ok(w) => return Ok(DirectionalWitness::Coprime(w)),
        Err(WitnessError::NoCoprimePrime { .. }) => {}
        Err(e) => return Err(e),
    }
    let n = power_of(q, ms.base()).ok_or(WitnessError::Unsupported { q, l: ms.base() })?;
    witness_directional_power(ms, n, u, v, alpha_bound).map(DirectionalWitness::Power)
}

/// `y|_{Λ_i}` from depth `start_depth` on, as an `Ω`-word.
pub fn extract_fiber_point(ms: &MultShift, y: &Pattern, i: u64, start_depth: u64) -> Result<Word, MultError> {
    ms.extract_fiber(y, i, start_depth)
}

/// The pattern whose `Λ_1` fiber is `w` (positions `1, l, l², ...`), with
/// nothing else constrained.
pub fn embed_word(w: &Word, l: u64) -> Result<Pattern, ShiftError> {
    let mut pos: u64 = 1;
    let mut entries = Vec::with_capacity(w.len());
    for (idx, &s) in w.symbols().iter().enumerate() {
        if idx > 0 {
            pos = pos
                .checked_mul(l)
                .ok_or_else(|| ShiftError::InvalidSpec("embedded word overflows u64 positions".into()))?;
        }
        entries.push((pos, s));
    }
    Pattern::from_entries(entries)
}

/// Classes touched by `v` after scaling, for diagnostics.
pub fn target_classes(
    ms: &MultShift,
    u: &Pattern,
    v: &Pattern,
    alpha: u64,
    q: u64,
    k: u64,
) -> Result<BTreeSet<u64>, WitnessError> {
    let scale = Scale::new(ms.base(), u.len(), alpha, q, k)?;
    let set = MultiplierConstraintSet::build(u, v, scale, ms.base())?;
    Ok(set.v_targets.values().map(|&(c, _)| c).collect())
}
