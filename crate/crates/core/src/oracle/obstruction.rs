//! Proofs that no depth `k` makes `X_Ω^(l)` connect two patterns in the
//! direction `l^n`, for SFT base shifts.
//!
//! Fix `α`. As `k` grows, each scaled `v`-fiber slides along its target
//! class while the `u`-fiber stays put, so the class is realizable iff
//! `S·A^t·T ≠ 0` for the De Bruijn adjacency `A` and `t = nk + const` once the
//! two blocks no longer overlap. Boolean powers are eventually periodic,
//! `A^(t+P) = A^t` for `t >= t0`, so feasibility in `k` is periodic with
//! period `P` from an explicit threshold on, and checking one window of `k`
//! decides every `k`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::WitnessError;
use crate::mult::{MultShift, Pattern};
use crate::shift::{BoolMatrix, ShiftSpec};

use super::class_constraints;

/// Powers of `A` beyond this are not searched for a repeat.
const MAX_POWER: usize = 1 << 14;

/// Depths `k` in the window at which one class is realizable for one `α`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassResidues {
    pub alpha: u64,
    pub class: u64,
    pub feasible_k: Vec<u64>,
    /// Residues mod `period` that stay feasible from the threshold on.
    pub periodic_residues: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub power: u64,
    pub alphas: Vec<u64>,
    /// From this `k` on, feasibility repeats with `period`.
    pub threshold: u64,
    pub period: u64,
    /// Classes that fail for some `k` in the window.
    pub classes: Vec<ClassResidues>,
    /// True when no `k` works for all listed `α` simultaneously.
    pub proved: bool,
}

/// Preperiod and period of the boolean powers of `a`.
pub(super) fn power_period(a: &BoolMatrix) -> Option<(usize, usize)> {
    let mut seen: HashMap<BoolMatrix, usize> = HashMap::new();
    let mut m = BoolMatrix::identity(a.size());
    for t in 0..=MAX_POWER {
        if let Some(&first) = seen.get(&m) {
            return Some((first, t - first));
        }
        seen.insert(m.clone(), t);
        m = m.mul(a);
    }
    None
}

/// Attempts to prove that no `k >= 0` connects `u` to `v` with multiplier
/// `|u|·α·l^(nk)` for every `α` in `alphas`. Returns `None` for non-SFT base
/// shifts or when the matrix powers do not repeat within the search cap.
pub fn directional_obstruction(
    ms: &MultShift,
    n: u64,
    u: &Pattern,
    v: &Pattern,
    alphas: &[u64],
) -> Result<Option<Obstruction>, WitnessError> {
    let ShiftSpec::Sft(sft) = ms.omega() else {
        return Ok(None);
    };
    let graph = sft.graph();
    if graph.is_empty() || n == 0 {
        return Ok(None);
    }
    let Some((t0, period)) = power_period(&graph.adjacency()) else {
        return Ok(None);
    };
    let q = ms.base().pow(n as u32);
    let longest_left = ms
        .fiber_constraints(u)?
        .values()
        .filter_map(|c| c.max_position())
        .max()
        .unwrap_or(0)
        .max(graph.vertex_len() as u64);
    let threshold = (t0 as u64 + longest_left).div_ceil(n) + 1;
    let window = threshold + period as u64;

    let mut per_class: BTreeMap<(u64, u64), Vec<bool>> = BTreeMap::new();
    let mut any_k = vec![true; window as usize];
    for &alpha in alphas {
        for k in 0..window {
            let mut all = true;
            for (class, c) in class_constraints(ms, u, v, alpha, q, k)? {
                let ok = match &c {
                    Some(c) => ms.omega().partial_extendable(c)?,
                    None => false,
                };
                per_class
                    .entry((alpha, class))
                    .or_insert_with(|| vec![true; window as usize])[k as usize] = ok;
                all &= ok;
            }
            any_k[k as usize] &= all;
        }
    }
    let classes = per_class
        .into_iter()
        .filter(|(_, f)| f.iter().any(|ok| !ok))
        .map(|((alpha, class), f)| ClassResidues {
            alpha,
            class,
            feasible_k: (0..window).filter(|&k| f[k as usize]).collect(),
            periodic_residues: (threshold..window)
                .filter(|&k| f[k as usize])
                .map(|k| k % period as u64)
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect(),
        })
        .collect();
    Ok(Some(Obstruction {
        power: n,
        alphas: alphas.to_vec(),
        threshold,
        period: period as u64,
        classes,
        proved: !any_k.contains(&true),
    }))
}
