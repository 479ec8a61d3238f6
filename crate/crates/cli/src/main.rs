//! `multishift`: decide mixing properties of base shifts, build and verify
//! connection certificates in multiplicative subshifts, and run the
//! cross-validation campaign.
//!
//! Exit codes: 0 success, 1 a property or verification check failed,
//! 2 usage error or malformed input.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use multishift_core::dimension::dim_b_golden_mean;
use multishift_core::lambda::{class_of, decompose, offset_bound, pair_offset_bound};
use multishift_core::mult::parse_pattern_literal;
use multishift_core::oracle::{
    campaign, default_family, exists_witness_exact, probe_directional_q, probe_transitive_x, render_table,
    seeded_random_family, small_sft_family, verify, CampaignConfig, CampaignReport,
};
use multishift_core::spec_file::spec_to_json;
use multishift_core::witness::{
    witness_directional_coprime, witness_directional_power, witness_mixing, witness_transitive, WitnessCertificate,
};
use multishift_core::{
    parse_spec_str, BigUint, CertificateFile, MultShift, Pattern, Property, SearchBudget, ShiftError, ShiftSpec,
};

const BUDGET_ENV: &str = "MULTISHIFT_BUDGET";

#[derive(Parser)]
#[command(name = "multishift", version, about = "Multiplicative subshift toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide extensibility, transitivity and mixing of a base shift.
    Props {
        #[arg(long)]
        spec: PathBuf,
        /// Include the full verdicts with their evidence.
        #[arg(long)]
        evidence: bool,
    },
    /// List or count admissible blocks of the base shift, or of X with --l.
    Blocks {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        l: Option<u64>,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
    /// Check whether a pattern is admissible in X.
    Admissible {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        l: Option<u64>,
        /// `block:0110` or `l=2;support=1,2,4;values=1,1,0`.
        #[arg(long)]
        pattern: String,
    },
    /// Build a connection certificate for two patterns.
    Witness(WitnessArgs),
    /// Re-verify a certificate file from scratch.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Bounded search for witnesses: transitivity, or direction --q for one pair.
    Probe {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        l: u64,
        #[arg(long, requires_all = ["u", "v"])]
        q: Option<u64>,
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Cross-check the base/X property equivalences over a family of shifts.
    Campaign {
        /// Specs to check; defaults to the built-in family.
        #[arg(long)]
        spec: Vec<PathBuf>,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Number of seeded random specs added to the exhaustive family.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [2u64, 3])]
        bases: Vec<u64>,
        #[arg(long, value_enum, default_value_t = CampaignFormat::Json)]
        format: CampaignFormat,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Box dimension series of the multiplicative golden mean shift (l = 2).
    Dim {
        #[arg(long, default_value_t = 60)]
        terms: u64,
    },
    /// Export the De Bruijn graph of an SFT.
    Graph {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
    },
    /// Split n as alpha * l^k with l not dividing alpha.
    Decompose {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        l: u64,
    },
    /// Offset bound M with A_l * A_{l,N} inside l^0 A_l ∪ … ∪ l^M A_l.
    OffsetBound {
        #[arg(long)]
        l: u64,
        #[arg(long, required_unless_present = "u_len")]
        n: Option<u64>,
        /// Bound the offsets of a pattern pair instead.
        #[arg(long, requires = "v_len")]
        u_len: Option<u64>,
        #[arg(long)]
        v_len: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Transitive,
    Coprime,
    Power,
    Mixing,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum CampaignFormat {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    l: Option<u64>,
    #[arg(long)]
    u: String,
    #[arg(long)]
    v: String,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Depth exponent (transitive, mixing, exact).
    #[arg(long)]
    k: Option<u64>,
    /// Multiplier alpha (mixing, exact; selects the saved certificate otherwise).
    #[arg(long)]
    alpha: Option<u64>,
    /// Direction (coprime, power).
    #[arg(long)]
    q: Option<u64>,
    /// Certificates are listed for alpha up to this bound (coprime, power).
    #[arg(long, default_value_t = 16)]
    alpha_bound: u64,
    /// Save the selected certificate together with the spec.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Default)]
struct BudgetArgs {
    #[arg(long)]
    alpha_bound: Option<u64>,
    #[arg(long)]
    k_bound: Option<u64>,
    #[arg(long)]
    pair_length_bound: Option<u64>,
}

/// Errors that map to exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// A completed run whose check came out negative: exit 1, output already printed.
struct Outcome {
    ok: bool,
}

fn budget(args: &BudgetArgs) -> Result<SearchBudget> {
    let mut b = match std::env::var(BUDGET_ENV) {
        Ok(s) => s.parse().map_err(|e| usage(format!("{BUDGET_ENV}: {e}")))?,
        Err(_) => SearchBudget::default(),
    };
    if let Some(a) = args.alpha_bound {
        b.alpha_bound = a;
    }
    if let Some(k) = args.k_bound {
        b.k_bound = k;
    }
    if let Some(p) = args.pair_length_bound {
        b.pair_length_bound = p;
    }
    if b.alpha_bound == 0 || b.k_bound == 0 || b.pair_length_bound == 0 {
        return Err(usage("budget bounds must be positive"));
    }
    Ok(b)
}

fn load_spec(path: &Path) -> Result<ShiftSpec> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let parsed = parse_spec_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    for w in &parsed.warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(parsed.spec)
}

fn pattern(literal: &str, l: Option<u64>) -> Result<(u64, Pattern)> {
    let (named, p) = parse_pattern_literal(literal).map_err(|e| usage(format!("pattern {literal:?}: {e}")))?;
    match (named, l) {
        (Some(a), Some(b)) if a != b => Err(usage(format!("pattern {literal:?} names l={a} but --l is {b}"))),
        (Some(a), _) | (None, Some(a)) => Ok((a, p)),
        (None, None) => Err(usage(format!(
            "pattern {literal:?} needs a base: pass --l or write l=... in it"
        ))),
    }
}

fn mult_shift(spec: ShiftSpec, l: u64) -> Result<MultShift> {
    MultShift::new(spec, l).map_err(|e| usage(e.to_string()))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn big(n: &BigUint) -> Value {
    n.to_string()
        .parse::<u64>()
        .map(Value::from)
        .unwrap_or_else(|_| Value::String(n.to_string()))
}

fn props(spec: &ShiftSpec, evidence: bool) -> Result<Outcome> {
    let mut flags = serde_json::Map::new();
    let mut verdicts = Vec::new();
    for p in Property::ALL {
        match spec.decide(p) {
            Ok(v) => {
                if p != Property::TotallyTransitive {
                    flags.insert(p.name().into(), Value::Bool(v.value));
                }
                verdicts.push(serde_json::to_value(&v)?);
            }
            Err(e @ ShiftError::Undecidable { .. }) => {
                flags.insert(p.name().into(), Value::Null);
                verdicts.push(json!({"property": p, "undecidable": e.to_string()}));
            }
            Err(e) => return Err(e.into()),
        }
    }
    if evidence {
        print_json(&json!({"properties": flags, "verdicts": verdicts}))?;
    } else {
        print_json(&flags)?;
    }
    Ok(Outcome { ok: true })
}

fn blocks(spec: ShiftSpec, n: u64, l: Option<u64>, count_only: bool) -> Result<Outcome> {
    if n == 0 {
        return Err(usage("--n must be positive"));
    }
    let (count, listed) = match l {
        None => {
            let n = n as usize;
            let c = spec.count_blocks(n)?;
            let listed = if count_only { None } else { Some(spec.blocks(n)?) };
            (c, listed)
        }
        Some(l) => {
            let x = mult_shift(spec, l)?;
            let c = x.count_blocks(n)?;
            let listed = if count_only { None } else { Some(x.enumerate_blocks(n)?) };
            (c, listed)
        }
    };
    let mut out = json!({"n": n, "count": big(&count)});
    if let Some(l) = l {
        out["l"] = l.into();
    }
    if let Some(ws) = listed {
        out["blocks"] = ws.iter().map(|w| w.to_string()).collect();
    }
    print_json(&out)?;
    Ok(Outcome { ok: true })
}

fn admissible(spec: ShiftSpec, l: Option<u64>, literal: &str) -> Result<Outcome> {
    let (l, p) = pattern(literal, l)?;
    let x = mult_shift(spec, l)?;
    let violation = x.first_violation(&p)?;
    print_json(&json!({"pattern": p, "l": l, "admissible": violation.is_none(), "violating_class": violation}))?;
    Ok(Outcome {
        ok: violation.is_none(),
    })
}

fn save(path: &Path, spec: &ShiftSpec, cert: &WitnessCertificate) -> Result<()> {
    let file = CertificateFile::new(spec, cert.clone());
    fs::write(path, serde_json::to_string_pretty(&file)? + "\n").with_context(|| format!("writing {}", path.display()))
}

fn witness(a: &WitnessArgs) -> Result<Outcome> {
    let spec = load_spec(&a.spec)?;
    let (lu, u) = pattern(&a.u, a.l)?;
    let (lv, v) = pattern(&a.v, a.l.or(Some(lu)))?;
    if lu != lv {
        return Err(usage(format!("patterns name different bases {lu} and {lv}")));
    }
    let x = mult_shift(spec.clone(), lu)?;
    let need = |name: &str, v: Option<u64>| v.ok_or_else(|| usage(format!("--mode needs --{name}")));
    let (output, selected): (Value, Option<WitnessCertificate>) = match a.mode {
        Mode::Transitive => {
            let c = witness_transitive(&x, &u, &v, a.k.unwrap_or(0))?;
            (serde_json::to_value(&c)?, Some(c))
        }
        Mode::Coprime => {
            let w = witness_directional_coprime(&x, need("q", a.q)?, &u, &v)?;
            let certs = (1..=a.alpha_bound)
                .filter(|al| al % w.direction != 0)
                .map(|al| w.certificate(&x, al))
                .collect::<Result<Vec<_>, _>>()?;
            let pick = a.alpha.unwrap_or(1);
            let sel = certs.iter().find(|c| c.alpha == pick).cloned();
            (json!({"witness": w, "certificates": certs}), sel)
        }
        Mode::Power => {
            let q = need("q", a.q)?;
            let n = multishift_core::witness::power_of(q, lu)
                .ok_or_else(|| usage(format!("--q {q} is not a power of {lu}")))?;
            let w = witness_directional_power(&x, n, &u, &v, a.alpha_bound)?;
            let pick = a.alpha.unwrap_or(1);
            let sel = w.certificates.iter().find(|c| c.alpha == pick).cloned();
            (serde_json::to_value(&w)?, sel)
        }
        Mode::Mixing => {
            let w = witness_mixing(&x, &u, &v)?;
            let cert = match (a.alpha, a.k) {
                (Some(al), Some(k)) => Some(w.certificate(&x, al, k)?),
                (None, None) => None,
                _ => return Err(usage("--mode mixing takes both --alpha and --k, or neither")),
            };
            (json!({"witness": w, "certificate": cert}), cert)
        }
        Mode::Exact => {
            let (al, k) = (need("alpha", a.alpha)?, need("k", a.k)?);
            if al % lu == 0 {
                return Err(usage(format!("alpha {al} is divisible by l = {lu}")));
            }
            let c = exists_witness_exact(&x, &u, &v, al, k)?;
            (json!({"exists": c.is_some(), "certificate": c}), c)
        }
    };
    print_json(&output)?;
    let found = !matches!(a.mode, Mode::Exact) || selected.is_some();
    if let Some(path) = &a.out {
        let cert = selected
            .as_ref()
            .ok_or_else(|| anyhow!("no certificate selected to save"))?;
        save(path, &spec, cert)?;
    }
    Ok(Outcome { ok: found })
}

fn verify_file(path: &Path) -> Result<Outcome> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let (parsed, cert) = CertificateFile::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let result = verify(&parsed.spec, &cert);
    print_json(&json!({
        "valid": result.is_ok(),
        "error": result.as_ref().err().map(|e| e.to_string()),
        "multiplier": cert.multiplier,
        "construction": cert.construction,
    }))?;
    Ok(Outcome { ok: result.is_ok() })
}

fn probe(
    spec: ShiftSpec,
    l: u64,
    q: Option<u64>,
    u: Option<&str>,
    v: Option<&str>,
    b: SearchBudget,
) -> Result<Outcome> {
    let x = mult_shift(spec, l)?;
    match q {
        None => print_json(&probe_transitive_x(&x, &b)?)?,
        Some(q) => {
            let (_, u) = pattern(u.expect("clap enforces --u"), Some(l))?;
            let (_, v) = pattern(v.expect("clap enforces --v"), Some(l))?;
            print_json(&probe_directional_q(&x, q, &u, &v, &b)?)?;
        }
    }
    Ok(Outcome { ok: true })
}

fn print_campaign(report: &CampaignReport, format: CampaignFormat) -> Result<()> {
    let mut out = io::stdout().lock();
    match format {
        CampaignFormat::Json => {
            for row in &report.rows {
                serde_json::to_writer(&mut out, row)?;
                writeln!(out)?;
            }
            let summary = json!({"summary": {
                "rows": report.rows.len(),
                "skipped": report.skipped,
                "inconclusive": report.inconclusive,
                "contradictions": report.contradictions,
                "certificates_verified": report.certificates_verified,
                "budget": report.config.budget,
                "table": report.table,
            }});
            serde_json::to_writer(&mut out, &summary)?;
            writeln!(out)?;
        }
        CampaignFormat::Table => write!(out, "{}", render_table(report))?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Props { spec, evidence } => props(&load_spec(&spec)?, evidence),
        Command::Blocks { spec, n, l, count } => blocks(load_spec(&spec)?, n, l, count),
        Command::Admissible { spec, l, pattern } => admissible(load_spec(&spec)?, l, &pattern),
        Command::Witness(a) => witness(&a),
        Command::Verify { cert } => verify_file(&cert),
        Command::Probe {
            spec,
            l,
            q,
            u,
            v,
            budget: b,
        } => probe(load_spec(&spec)?, l, q, u.as_deref(), v.as_deref(), budget(&b)?),
        Command::Campaign {
            spec,
            seed,
            random,
            bases,
            format,
            budget: b,
        } => {
            if bases.iter().any(|&l| l < 2) {
                return Err(usage("bases must be at least 2"));
            }
            let family = if !spec.is_empty() {
                spec.iter().map(|p| load_spec(p)).collect::<Result<Vec<_>>>()?
            } else if let Some(r) = random {
                let mut f = small_sft_family();
                f.extend(seeded_random_family(r, seed));
                multishift_core::oracle::dedup_family(f)
            } else {
                default_family(seed)
            };
            let cfg = CampaignConfig {
                bases,
                budget: budget(&b)?,
                ..CampaignConfig::default()
            };
            let report = campaign(&family, &cfg);
            print_campaign(&report, format)?;
            Ok(Outcome {
                ok: report.contradictions == 0,
            })
        }
        Command::Dim { terms } => {
            if !(1..=254).contains(&terms) {
                return Err(usage("--terms must lie in 1..=254"));
            }
            let r = dim_b_golden_mean(terms);
            print_json(&json!({
                "value": r.value(),
                "partial_sum": r.partial_sum,
                "terms": r.terms_used,
                "tail_bound": r.tail_bound.to_f64(),
            }))?;
            Ok(Outcome { ok: true })
        }
        Command::Graph { spec, format } => {
            let spec = load_spec(&spec)?;
            let sft = spec.as_sft().ok_or_else(|| usage("graph export needs an SFT spec"))?;
            let g = sft.graph();
            match format {
                GraphFormat::Dot => print!("{}", g.to_dot()),
                GraphFormat::Json => {
                    let edges: Vec<(usize, usize)> = (0..g.vertex_count())
                        .flat_map(|i| g.successors(i).iter().map(move |&j| (i, j)))
                        .collect();
                    print_json(&json!({
                        "spec": serde_json::from_str::<Value>(&spec_to_json(&spec))?,
                        "vertex_len": g.vertex_len(),
                        "vertices": g.vertices().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                        "edges": edges,
                        "pruned": g.pruned().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                    }))?;
                }
            }
            Ok(Outcome { ok: true })
        }
        Command::Decompose { n, l } => {
            let d = decompose(n, l).map_err(|e| usage(e.to_string()))?;
            let c = class_of(n, l).map_err(|e| usage(e.to_string()))?;
            print_json(&json!({"n": n, "l": l, "alpha": d.alpha, "k": d.k, "class": c.representative()}))?;
            Ok(Outcome { ok: true })
        }
        Command::OffsetBound { l, n, u_len, v_len } => {
            let out = match (u_len, v_len, n) {
                (Some(u), Some(v), _) => {
                    json!({"l": l, "u_len": u, "v_len": v, "m": pair_offset_bound(u, v, l).map_err(|e| usage(e.to_string()))?})
                }
                (_, _, Some(n)) => serde_json::to_value(offset_bound(l, n).map_err(|e| usage(e.to_string()))?)?,
                _ => bail!(usage("pass --n, or --u-len with --v-len")),
            };
            print_json(&out)?;
            Ok(Outcome { ok: true })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome { ok: true }) => ExitCode::SUCCESS,
        Ok(Outcome { ok: false }) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
