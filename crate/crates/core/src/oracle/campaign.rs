//! Cross-validation of the three equivalences between properties of `Ω` and
//! of `X_Ω^(l)` over a family of base shifts.
//!
//! For every `(Ω, l)` the row decides the `Ω` side exactly and gathers
//! evidence for the `X` side: constructed certificates (all re-verified) when
//! the `Ω` property holds, an exact refutation when it fails. A witness found
//! where a refutation says none exists, or a constructed certificate that does
//! not verify, is a hard contradiction.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::WitnessError;
use crate::lambda::{a_set, decompose};
use crate::mult::{MultShift, Pattern};
use crate::shift::{GapSet, Property, SftSpec, ShiftSpec, SpacingSpec};
use crate::witness::{embed_word, witness_directional_power, witness_mixing, witness_transitive, WitnessCertificate};
use crate::word::Word;

use super::obstruction::power_period;
use super::{
    admissible_blocks, exists_witness_exact, probe_directional_q, probe_transitive_x, realizable, SearchBudget, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub bases: Vec<u64>,
    pub budget: SearchBudget,
    /// Longest blocks fed to the transitive and directional constructors.
    pub constructor_pair_length: u64,
    /// Longest blocks fed to the mixing constructor.
    pub mixing_pair_length: u64,
    /// Directional certificates are built for every `α <= power_alpha_bound`.
    pub power_alpha_bound: u64,
    /// Transitive certificates are built for every `k <= transitive_depths`.
    pub transitive_depths: u64,
    /// Largest gap examined when refuting mixing.
    pub gap_horizon: u64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            bases: vec![2, 3],
            budget: SearchBudget::default(),
            constructor_pair_length: 3,
            mixing_pair_length: 2,
            power_alpha_bound: 16,
            transitive_depths: 3,
            gap_horizon: 128,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    /// The `X` side matches the `Ω` side.
    Pass,
    /// A hard contradiction was found.
    Fail,
    /// The `Ω` property fails but no refutation on `X` was found in budget.
    Inconclusive,
}

/// One equivalence checked on one row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceCheck {
    /// The decided `Ω` property.
    pub omega: bool,
    /// Evidence on the `X` property.
    pub x: Verdict,
    pub status: CheckStatus,
    pub certificates: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contradiction {
    pub check: String,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Box<WitnessCertificate>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaProperties {
    pub extensible: bool,
    pub transitive: bool,
    pub totally_transitive: bool,
    pub weakly_mixing: bool,
    pub mixing: bool,
}

impl OmegaProperties {
    fn get(&self, p: Property) -> bool {
        match p {
            Property::Extensible => self.extensible,
            Property::Transitive => self.transitive,
            Property::TotallyTransitive => self.totally_transitive,
            Property::WeaklyMixing => self.weakly_mixing,
            Property::Mixing => self.mixing,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignRow {
    pub spec: String,
    pub base: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<OmegaProperties>,
    /// Extensible `Ω` versus transitive `X`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transitivity: Option<EquivalenceCheck>,
    /// Weakly mixing `Ω` versus `l`-directional mixing `X`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directional: Option<EquivalenceCheck>,
    /// Weakly mixing `Ω` versus `l²`-directional mixing `X`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directional_square: Option<EquivalenceCheck>,
    /// Mixing `Ω` versus mixing `X`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixing: Option<EquivalenceCheck>,
    pub contradictions: Vec<Contradiction>,
}

impl CampaignRow {
    pub fn checks(&self) -> impl Iterator<Item = &EquivalenceCheck> {
        [
            &self.transitivity,
            &self.directional,
            &self.directional_square,
            &self.mixing,
        ]
        .into_iter()
        .flatten()
    }

    pub fn certificates(&self) -> usize {
        self.checks().map(|c| c.certificates).sum()
    }
}

/// Properties of `X_Ω^(l)` in the summary table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XProperty {
    Transitive,
    Directional,
    Mixing,
}

/// Relation between an `X` property and an `Ω` property: `Eq` if both
/// implications hold, `T` if only "X-property ⇒ Ω-property" holds, `F` if
/// that implication fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Implication {
    #[serde(rename = "EQ")]
    Eq,
    T,
    F,
}

impl Implication {
    fn label(self) -> &'static str {
        match self {
            Implication::Eq => "EQ",
            Implication::T => "T",
            Implication::F => "F",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCell {
    pub omega_property: Property,
    pub x_property: XProperty,
    pub observed: Implication,
    pub expected: Implication,
    /// Rows with both sides decided.
    pub support: usize,
}

const TABLE_ROWS: [Property; 4] = [
    Property::Extensible,
    Property::Transitive,
    Property::WeaklyMixing,
    Property::Mixing,
];
const TABLE_COLUMNS: [XProperty; 3] = [XProperty::Transitive, XProperty::Directional, XProperty::Mixing];

fn expected_relation(p: Property, x: XProperty) -> Implication {
    use Implication::*;
    match (p, x) {
        (Property::Extensible, XProperty::Transitive) => Eq,
        (Property::Extensible, _) => T,
        (Property::Transitive | Property::TotallyTransitive, XProperty::Transitive) => F,
        (Property::Transitive | Property::TotallyTransitive, _) => T,
        (Property::WeaklyMixing, XProperty::Transitive) => F,
        (Property::WeaklyMixing, XProperty::Directional) => Eq,
        (Property::WeaklyMixing, XProperty::Mixing) => T,
        (Property::Mixing, XProperty::Mixing) => Eq,
        (Property::Mixing, _) => F,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub rows: Vec<CampaignRow>,
    pub contradictions: usize,
    pub certificates_verified: usize,
    pub skipped: usize,
    pub inconclusive: usize,
    pub table: Vec<TableCell>,
}

struct RowContext<'a> {
    ms: &'a MultShift,
    cfg: &'a CampaignConfig,
    contradictions: Vec<Contradiction>,
}

impl RowContext<'_> {
    fn contradiction(&mut self, check: &str, detail: String, certificate: Option<WitnessCertificate>) {
        self.contradictions.push(Contradiction {
            check: check.into(),
            detail,
            certificate: certificate.map(Box::new),
        });
    }

    fn status(&self, before: usize, x: Verdict) -> CheckStatus {
        if self.contradictions.len() > before {
            CheckStatus::Fail
        } else if x == Verdict::Inconclusive {
            CheckStatus::Inconclusive
        } else {
            CheckStatus::Pass
        }
    }
}

fn transitivity_check(ctx: &mut RowContext, extensible: bool) -> Result<EquivalenceCheck, WitnessError> {
    let before = ctx.contradictions.len();
    let (ms, cfg) = (ctx.ms, ctx.cfg);
    let l = ms.base();
    let probe = probe_transitive_x(ms, &cfg.budget)?;
    if extensible {
        let blocks = admissible_blocks(ms, cfg.constructor_pair_length)?;
        let mut certificates = 0;
        for u in &blocks {
            for v in &blocks {
                for k in 0..=cfg.transitive_depths {
                    match witness_transitive(ms, u, v, k) {
                        Ok(_) => certificates += 1,
                        Err(e) => ctx.contradiction(
                            "transitivity",
                            format!("constructor failed for u={u}, v={v}, k={k}: {e}"),
                            None,
                        ),
                    }
                }
            }
        }
        if let Some((u, v)) = probe.unwitnessed.first() {
            ctx.contradiction(
                "transitivity",
                format!(
                    "{} of {} pairs unwitnessed in budget although the prime multiplier lies inside it, first u={u}, v={v}",
                    probe.unwitnessed.len(),
                    probe.pairs
                ),
                None,
            );
        }
        let x = Verdict::Witnessed;
        return Ok(EquivalenceCheck {
            omega: true,
            x,
            status: ctx.status(before, x),
            certificates,
            detail: format!("{}/{} probe pairs witnessed", probe.witnessed, probe.pairs),
        });
    }

    // A vertex with bounded in-paths of length <= h cannot start at depth
    // >= h + 2, which is where every scaled copy of its embedding lands when
    // |u| = l^(h+1).
    let Some(sft) = ms.omega().as_sft() else {
        return Ok(EquivalenceCheck {
            omega: false,
            x: Verdict::Inconclusive,
            status: CheckStatus::Inconclusive,
            certificates: 0,
            detail: "no refutation available for this base shift".into(),
        });
    };
    let graph = sft.graph();
    let (vertex, h) = graph
        .vertices()
        .iter()
        .zip(graph.max_in_depth())
        .find_map(|(w, d)| d.map(|d| (w.clone(), d as u32)))
        .expect("a non-extensible SFT has a vertex with bounded in-paths");
    let u_len = l.pow(h + 1);
    let u = Pattern::block(&ms.least_block(u_len)?);
    let v = embed_word(&vertex, l)?;
    for alpha in a_set(l, cfg.budget.alpha_bound) {
        for k in 0..=cfg.budget.k_bound {
            if realizable(ms, &u, &v, alpha, l, k)? {
                let cert = exists_witness_exact(ms, &u, &v, alpha, k)?;
                ctx.contradiction(
                    "transitivity",
                    format!("witness for a refuted pair: vertex {vertex} with in-depth {h}, alpha={alpha}, k={k}"),
                    cert,
                );
            }
        }
    }
    let x = Verdict::Refuted;
    Ok(EquivalenceCheck {
        omega: false,
        x,
        status: ctx.status(before, x),
        certificates: 0,
        detail: format!(
            "vertex {vertex} has in-paths of length <= {h}; u = least block of length {u_len}, v = its chain embedding"
        ),
    })
}

fn directional_check(ctx: &mut RowContext, weakly_mixing: bool, n: u64) -> Result<EquivalenceCheck, WitnessError> {
    let before = ctx.contradictions.len();
    let (ms, cfg) = (ctx.ms, ctx.cfg);
    let q = ms.base().pow(n as u32);
    let name = if n == 1 { "directional" } else { "directional_square" };
    if weakly_mixing {
        let blocks = admissible_blocks(ms, cfg.constructor_pair_length)?;
        let mut certificates = 0;
        let mut max_k = 0;
        for u in &blocks {
            for v in &blocks {
                match witness_directional_power(ms, n, u, v, cfg.power_alpha_bound) {
                    Ok(w) => {
                        certificates += w.certificates.len();
                        max_k = max_k.max(w.k);
                        if w.k <= cfg.budget.k_bound {
                            let probe = probe_directional_q(ms, q, u, v, &cfg.budget)?;
                            if probe.k.is_none_or(|pk| pk > w.k) {
                                ctx.contradiction(
                                    name,
                                    format!("probe missed the constructed depth k={} for u={u}, v={v}", w.k),
                                    None,
                                );
                            }
                        }
                    }
                    Err(e) => ctx.contradiction(name, format!("constructor failed for u={u}, v={v}: {e}"), None),
                }
            }
        }
        let x = Verdict::Witnessed;
        return Ok(EquivalenceCheck {
            omega: true,
            x,
            status: ctx.status(before, x),
            certificates,
            detail: format!(
                "Δ-covered: {} pairs, largest constructed k = {max_k}",
                blocks.len() * blocks.len()
            ),
        });
    }

    let blocks = admissible_blocks(ms, cfg.budget.pair_length_bound)?;
    for u in &blocks {
        for v in &blocks {
            let probe = probe_directional_q(ms, q, u, v, &cfg.budget)?;
            if probe.verdict == Verdict::Refuted {
                let o = probe.obstruction.as_ref().expect("refuted probes carry an obstruction");
                let x = Verdict::Refuted;
                return Ok(EquivalenceCheck {
                    omega: false,
                    x,
                    status: ctx.status(before, x),
                    certificates: 0,
                    detail: format!(
                        "u={u}, v={v}: no k works for alpha in {:?} (threshold {}, period {})",
                        o.alphas, o.threshold, o.period
                    ),
                });
            }
        }
    }
    Ok(EquivalenceCheck {
        omega: false,
        x: Verdict::Inconclusive,
        status: CheckStatus::Inconclusive,
        certificates: 0,
        detail: format!(
            "no refuted pair among blocks of length <= {}",
            cfg.budget.pair_length_bound
        ),
    })
}

/// Whether a failed connection at gap `m` provably fails again at
/// arbitrarily large gaps.
fn failure_recurs(omega: &ShiftSpec, a: &Word, b: &Word, m: u64) -> bool {
    match omega {
        ShiftSpec::Sft(s) => {
            let g = s.graph();
            let reach = a.len().max(g.vertex_len()) as u64;
            power_period(&g.adjacency()).is_some_and(|(t0, _)| m >= t0 as u64 + reach)
        }
        ShiftSpec::Spacing(s) => {
            matches!(s.gaps(), GapSet::PowerComplement { .. }) && a.symbols().contains(&1) && b.symbols().contains(&1)
        }
    }
}

fn mixing_check(ctx: &mut RowContext, mixing: bool) -> Result<EquivalenceCheck, WitnessError> {
    let before = ctx.contradictions.len();
    let (ms, cfg) = (ctx.ms, ctx.cfg);
    let l = ms.base();
    if mixing {
        let blocks = admissible_blocks(ms, cfg.mixing_pair_length)?;
        let mut certificates = 0;
        let mut threshold = 0;
        for u in &blocks {
            for v in &blocks {
                let w = witness_mixing(ms, u, v)?;
                threshold = w.threshold;
                let lo = l.pow(w.threshold as u32);
                for value in lo..=8 * lo {
                    let d = decompose(value, l)?;
                    match w.certificate(ms, d.alpha, d.k) {
                        Ok(_) => certificates += 1,
                        Err(e) => ctx.contradiction(
                            "mixing",
                            format!("constructor failed for u={u}, v={v}, alpha={}, k={}: {e}", d.alpha, d.k),
                            None,
                        ),
                    }
                }
            }
        }
        let x = Verdict::Witnessed;
        return Ok(EquivalenceCheck {
            omega: true,
            x,
            status: ctx.status(before, x),
            certificates,
            detail: format!("threshold N = {threshold}, multipliers alpha*l^k in [l^N, 8*l^N]"),
        });
    }

    let omega = ms.omega();
    let horizon = cfg.gap_horizon;
    let mut words = omega.blocks(1)?;
    words.extend(omega.blocks(2)?);
    let mut chosen = None;
    'search: for a in &words {
        for b in &words {
            for m in (horizon / 2..=horizon).rev() {
                if !omega.connects(a, b, m)? && failure_recurs(omega, a, b, m) {
                    chosen = Some((a.clone(), b.clone(), m));
                    break 'search;
                }
            }
        }
    }
    let Some((a, b, m)) = chosen else {
        return Ok(EquivalenceCheck {
            omega: false,
            x: Verdict::Inconclusive,
            status: CheckStatus::Inconclusive,
            certificates: 0,
            detail: format!("no recurring connection failure below gap {horizon}"),
        });
    };
    // With u = embed(a), v = embed(b) and alpha = 1, the multiplier l^(|a|-1+k)
    // places b at depth |a| + k of Λ_1, i.e. at gap k - 1 after a.
    let u = embed_word(&a, l)?;
    let v = embed_word(&b, l)?;
    let mut failures = 0;
    for gap in 1..=horizon {
        let expected = omega.connects(&a, &b, gap)?;
        let found = exists_witness_exact(ms, &u, &v, 1, gap + 1)?;
        failures += usize::from(!expected);
        if found.is_some() != expected {
            ctx.contradiction(
                "mixing",
                format!("exact oracle and base connection disagree for a={a}, b={b}, gap={gap}"),
                found,
            );
        }
    }
    let x = Verdict::Refuted;
    Ok(EquivalenceCheck {
        omega: false,
        x,
        status: ctx.status(before, x),
        certificates: 0,
        detail: format!("a={a}, b={b}: {failures} failing gaps up to {horizon}, recurring from gap {m}"),
    })
}

fn decide_all(omega: &ShiftSpec) -> Result<OmegaProperties, WitnessError> {
    let d = |p| omega.decide(p).map(|v| v.value);
    Ok(OmegaProperties {
        extensible: d(Property::Extensible)?,
        transitive: d(Property::Transitive)?,
        totally_transitive: d(Property::TotallyTransitive)?,
        weakly_mixing: d(Property::WeaklyMixing)?,
        mixing: d(Property::Mixing)?,
    })
}

fn run_row(omega: &ShiftSpec, l: u64, cfg: &CampaignConfig) -> CampaignRow {
    let mut row = CampaignRow {
        spec: omega.describe(),
        base: l,
        skipped: None,
        omega: None,
        transitivity: None,
        directional: None,
        directional_square: None,
        mixing: None,
        contradictions: Vec::new(),
    };
    if omega.is_empty() {
        row.skipped = Some("empty language".into());
        return row;
    }
    let props = match decide_all(omega) {
        Ok(p) => p,
        Err(e) => {
            row.skipped = Some(e.to_string());
            return row;
        }
    };
    let ms = MultShift::new(omega.clone(), l).expect("campaign bases are at least 2");
    let mut ctx = RowContext {
        ms: &ms,
        cfg,
        contradictions: Vec::new(),
    };
    let run =
        |ctx: &mut RowContext, name: &str, f: &dyn Fn(&mut RowContext) -> Result<EquivalenceCheck, WitnessError>| {
            match f(ctx) {
                Ok(c) => Some(c),
                Err(e) => {
                    ctx.contradiction(name, format!("check aborted: {e}"), None);
                    None
                }
            }
        };
    row.transitivity = run(&mut ctx, "transitivity", &|c| transitivity_check(c, props.extensible));
    row.directional = run(&mut ctx, "directional", &|c| {
        directional_check(c, props.weakly_mixing, 1)
    });
    row.directional_square = run(&mut ctx, "directional_square", &|c| {
        directional_check(c, props.weakly_mixing, 2)
    });
    row.mixing = run(&mut ctx, "mixing", &|c| mixing_check(c, props.mixing));
    row.omega = Some(props);
    row.contradictions = ctx.contradictions;
    row
}

fn x_value(row: &CampaignRow, x: XProperty) -> Option<bool> {
    let check = match x {
        XProperty::Transitive => row.transitivity.as_ref(),
        XProperty::Directional => row.directional.as_ref(),
        XProperty::Mixing => row.mixing.as_ref(),
    }?;
    match check.x {
        Verdict::Witnessed => Some(true),
        Verdict::Refuted => Some(false),
        Verdict::Inconclusive => None,
    }
}

fn summarize(rows: &[CampaignRow]) -> Vec<TableCell> {
    let mut cells = Vec::new();
    for p in TABLE_ROWS {
        for x in TABLE_COLUMNS {
            let mut support = 0;
            let mut forward = true;
            let mut backward = true;
            for row in rows {
                let (Some(props), Some(xv)) = (&row.omega, x_value(row, x)) else {
                    continue;
                };
                support += 1;
                let pv = props.get(p);
                forward &= !xv || pv;
                backward &= !pv || xv;
            }
            let observed = match (forward, backward) {
                (true, true) => Implication::Eq,
                (true, false) => Implication::T,
                (false, _) => Implication::F,
            };
            cells.push(TableCell {
                omega_property: p,
                x_property: x,
                observed,
                expected: expected_relation(p, x),
                support,
            });
        }
    }
    cells
}

/// Runs every `(spec, l)` row in parallel; row order follows the input.
pub fn campaign(family: &[ShiftSpec], cfg: &CampaignConfig) -> CampaignReport {
    let jobs: Vec<(&ShiftSpec, u64)> = family
        .iter()
        .flat_map(|s| cfg.bases.iter().map(move |&l| (s, l)))
        .collect();
    let rows: Vec<CampaignRow> = jobs.par_iter().map(|&(s, l)| run_row(s, l, cfg)).collect();
    let contradictions = rows.iter().map(|r| r.contradictions.len()).sum();
    let certificates_verified = rows.iter().map(CampaignRow::certificates).sum();
    let skipped = rows.iter().filter(|r| r.skipped.is_some()).count();
    let inconclusive = rows
        .iter()
        .filter(|r| r.checks().any(|c| c.status == CheckStatus::Inconclusive))
        .count();
    let table = summarize(&rows);
    CampaignReport {
        config: cfg.clone(),
        rows,
        contradictions,
        certificates_verified,
        skipped,
        inconclusive,
        table,
    }
}

fn short(p: Property) -> &'static str {
    match p {
        Property::Extensible => "extensible",
        Property::Transitive => "transitive",
        Property::TotallyTransitive => "totally transitive",
        Property::WeaklyMixing => "weakly mixing",
        Property::Mixing => "mixing",
    }
}

/// Text rendering of the observed implication table; a cell that differs
/// from the expected relation shows both.
pub fn render_table(report: &CampaignReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<16}| {:<14}{:<26}{:<14}",
        "Ω \\ X", "transitive", "l-directional mixing", "mixing"
    );
    let _ = writeln!(out, "{}", "-".repeat(70));
    for p in TABLE_ROWS {
        let mut line = format!("{:<16}|", short(p));
        for (x, width) in TABLE_COLUMNS.into_iter().zip([14, 26, 14]) {
            let cell = report
                .table
                .iter()
                .find(|c| c.omega_property == p && c.x_property == x)
                .expect("table is complete");
            let text = if cell.observed == cell.expected {
                cell.observed.label().to_string()
            } else {
                format!("{} (exp {})", cell.observed.label(), cell.expected.label())
            };
            let _ = write!(line, " {text:<width$}", width = width - 1);
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
    let _ = writeln!(
        out,
        "EQ: equivalent; T: X-property implies Ω-property only; F: X-property does not imply Ω-property."
    );
    let _ = writeln!(
        out,
        "rows: {}, skipped: {}, with inconclusive checks: {}, certificates verified: {}, contradictions: {}",
        report.rows.len(),
        report.skipped,
        report.inconclusive,
        report.certificates_verified,
        report.contradictions
    );
    out
}

/// Every binary SFT whose forbidden set is a subset of `{0, 1, 00, 01, 10, 11}`.
pub fn small_sft_family() -> Vec<ShiftSpec> {
    let pool: Vec<Word> = ["0", "1", "00", "01", "10", "11"]
        .iter()
        .map(|w| w.parse().unwrap())
        .collect();
    (0u32..64)
        .map(|mask| {
            let forbidden = pool
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, w)| w.clone())
                .collect();
            ShiftSpec::Sft(SftSpec::normalized(2, forbidden).expect("binary words").0)
        })
        .collect()
}

/// `count` binary SFTs with one to four forbidden words of length at most 3,
/// drawn from a seeded generator.
pub fn seeded_random_family(count: usize, seed: u64) -> Vec<ShiftSpec> {
    const LENGTHS: [usize; 10] = [1, 2, 2, 2, 3, 3, 3, 3, 3, 3];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=4);
            let forbidden = (0..n)
                .map(|_| {
                    let len = LENGTHS[rng.gen_range(0..LENGTHS.len())];
                    Word::new((0..len).map(|_| rng.gen_range(0..2)).collect())
                })
                .collect();
            ShiftSpec::Sft(SftSpec::normalized(2, forbidden).expect("binary words").0)
        })
        .collect()
}

/// Drops SFTs whose language agrees with an earlier one on words of length
/// up to 5 (enough to separate SFTs with forbidden words of length <= 3).
pub fn dedup_family(specs: Vec<ShiftSpec>) -> Vec<ShiftSpec> {
    let mut seen = BTreeSet::new();
    specs
        .into_iter()
        .filter(|s| match s {
            ShiftSpec::Sft(sft) => {
                let key: Vec<Vec<Word>> = (1..=5).map(|n| sft.graph().words(n)).collect();
                seen.insert((sft.alphabet(), key))
            }
            ShiftSpec::Spacing(_) => true,
        })
        .collect()
}

/// The exhaustive length-2 family, 200 seeded random length-3 specs, and two
/// spacing shifts (cofinite and thick gap sets), deduplicated.
pub fn default_family(seed: u64) -> Vec<ShiftSpec> {
    let mut specs = small_sft_family();
    specs.extend(seeded_random_family(200, seed));
    specs.push(ShiftSpec::Spacing(
        SpacingSpec::cofinite([1, 2]).expect("valid gap set"),
    ));
    specs.push(ShiftSpec::Spacing(
        SpacingSpec::power_complement(2, 10).expect("valid gap set"),
    ));
    dedup_family(specs)
}
