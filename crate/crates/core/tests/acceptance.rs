//! Acceptance checks, one PASS/FAIL line per criterion with pinned
//! tolerances and wall-clock limits.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use multishift_core::dimension::{dim_b_golden_mean, fib, tail_bound, Fixed};
use multishift_core::lambda::{a_set, class_of, decompose, offset_bound, offset_of, pair_offset_bound};
use multishift_core::oracle::{
    campaign, default_family, exists_witness_exact, probe_directional_q, small_sft_family, verify, CampaignConfig,
    Verdict,
};
use multishift_core::witness::{witness_mixing, witness_transitive};
use multishift_core::{MultShift, Pattern, Property, SearchBudget, ShiftSpec, SpacingSpec, Word};

const DIMENSION_AGREEMENT: f64 = 1e-12;
const DIMENSION_CONVERGENCE: f64 = 1e-9;
const CAMPAIGN_SEED: u64 = 0x5eed;
const ORACLE_SEED: u64 = 2024;
const ORACLE_INSTANCES: usize = 500;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn block(s: &str) -> Pattern {
    Pattern::block(&s.parse::<Word>().unwrap())
}

fn run(id: u32, title: &str, limit: Duration, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into()))
    });
    let elapsed = start.elapsed();
    let outcome = match outcome {
        Ok(_) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
        other => other,
    };
    let (tag, detail) = match &outcome {
        Ok(d) => ("PASS", d.clone()),
        Err(e) => ("FAIL", e.clone()),
    };
    println!("{tag} criterion {id}: {title} [{elapsed:.2?} / {limit:?}] {detail}");
    outcome.is_ok()
}

fn worked_examples() -> Check {
    // One-way shift: 0 never follows 1.
    let f01 = ShiftSpec::sft(2, &["01"]).map_err(err)?;
    ensure!(
        f01.decide(Property::Extensible).map_err(err)?.value,
        "F={{01}} should be extensible"
    );
    ensure!(
        !f01.decide(Property::Transitive).map_err(err)?.value,
        "F={{01}} should not be transitive"
    );
    let x = MultShift::new(f01.clone(), 2).map_err(err)?;
    for k in 0..=8 {
        ensure!(
            exists_witness_exact(&x, &block("00"), &block("1"), 1, k)
                .map_err(err)?
                .is_none(),
            "F={{01}}: witness at k={k}"
        );
    }
    let cert = witness_transitive(&x, &block("00"), &block("1"), 0).map_err(err)?;
    ensure!(cert.alpha == 3, "transitive witness alpha {} != 3", cert.alpha);
    verify(&f01, &cert).map_err(err)?;

    // Alternating shift: parity obstruction in direction 2.
    let alt = ShiftSpec::sft(2, &["00", "11"]).map_err(err)?;
    ensure!(
        alt.decide(Property::Transitive).map_err(err)?.value,
        "alternating shift is transitive"
    );
    ensure!(
        !alt.decide(Property::WeaklyMixing).map_err(err)?.value,
        "alternating shift is not weakly mixing"
    );
    let x = MultShift::new(alt, 2).map_err(err)?;
    let budget = SearchBudget {
        alpha_bound: 9,
        k_bound: 8,
        pair_length_bound: 4,
    };
    let probe = probe_directional_q(&x, 2, &block("0110"), &block("1011"), &budget).map_err(err)?;
    ensure!(probe.k.is_none(), "alternating shift: found k={:?}", probe.k);
    ensure!(probe.verdict == Verdict::Refuted, "verdict {:?}", probe.verdict);
    ensure!(probe.failures.len() == 9, "expected a failure transcript for k=0..=8");
    let o = probe.obstruction.as_ref().ok_or("missing obstruction")?;
    let residues: BTreeMap<u64, Vec<u64>> = o
        .classes
        .iter()
        .filter(|c| c.alpha == 1)
        .map(|c| (c.class, c.periodic_residues.clone()))
        .collect();
    ensure!(
        o.proved && o.period == 2 && residues.get(&1) == Some(&vec![1]) && residues.get(&3) == Some(&vec![0]),
        "parity transcript {residues:?}"
    );

    // Cofinite spacing shift P = {0} ∪ [3, ∞) with l = 6.
    let sp: ShiftSpec = SpacingSpec::cofinite([1, 2]).map_err(err)?.into();
    ensure!(
        sp.decide(Property::Mixing).map_err(err)?.value,
        "cofinite spacing shift is mixing"
    );
    let x = MultShift::new(sp.clone(), 6).map_err(err)?;
    ensure!(
        !x.is_admissible(&block("11111111")).map_err(err)?,
        "1^8 puts 1s at depths 1 and 2 of Λ_1"
    );
    let (u, v) = (block("11111011"), block("11111"));
    let w = witness_mixing(&x, &u, &v).map_err(err)?;
    ensure!(w.threshold == 3, "threshold {} != 3", w.threshold);
    let mut verified = 0;
    for m in 216..=1000u64 {
        let d = decompose(m, 6).map_err(err)?;
        let cert = w.certificate(&x, d.alpha, d.k).map_err(err)?;
        verify(&sp, &cert).map_err(|e| format!("alpha*6^k={m}: {e}"))?;
        if m == 243 {
            ensure!(cert.multiplier == "1944", "243 gives multiplier {}", cert.multiplier);
        }
        verified += 1;
    }
    Ok(format!("obstruction period 2; {verified} mixing certificates for alpha*6^k in [216, 1000]; u'=11111011 stands in for 1^8"))
}

fn equivalence_campaign() -> Check {
    ensure!(small_sft_family().len() == 64, "exhaustive family size");
    let family = default_family(CAMPAIGN_SEED);
    let report = campaign(&family, &CampaignConfig::default());
    ensure!(report.rows.len() == 2 * family.len(), "one row per (spec, l)");
    if let Some(row) = report.rows.iter().find(|r| !r.contradictions.is_empty()) {
        return Err(format!(
            "{} contradictions, first on {} l={}: {:?}",
            report.contradictions, row.spec, row.base, row.contradictions[0]
        ));
    }
    ensure!(report.certificates_verified > 0, "no certificates checked");
    let find = |f: &[&str], l: u64| {
        let name = ShiftSpec::sft(2, f).unwrap().describe();
        report.rows.iter().find(|r| r.spec == name && r.base == l).cloned()
    };
    let one_way = find(&["01"], 2).ok_or("missing F={01} row")?;
    let o = one_way.omega.as_ref().ok_or("F={01} skipped")?;
    ensure!(o.extensible && !o.transitive, "F={{01}} base verdicts");
    ensure!(
        one_way.transitivity.as_ref().map(|c| c.x) == Some(Verdict::Witnessed)
            && one_way.directional.as_ref().map(|c| c.x) == Some(Verdict::Refuted),
        "F={{01}} X verdicts"
    );
    let alt = find(&["00", "11"], 2).ok_or("missing alternating row")?;
    ensure!(
        alt.directional.as_ref().map(|c| c.x) == Some(Verdict::Refuted),
        "alternating directional verdict"
    );
    for l in [2, 3] {
        let gm = find(&["11"], l).ok_or("missing golden mean row")?;
        let o = gm.omega.as_ref().ok_or("golden mean skipped")?;
        ensure!(
            o.extensible && o.transitive && o.weakly_mixing && o.mixing,
            "golden mean base verdicts at l={l}"
        );
        ensure!(
            gm.checks().all(|c| c.x == Verdict::Witnessed),
            "golden mean X verdicts at l={l}"
        );
    }
    let mismatched: Vec<_> = report.table.iter().filter(|c| c.observed != c.expected).collect();
    ensure!(mismatched.is_empty(), "table cells differ: {mismatched:?}");
    Ok(format!(
        "{} specs, {} rows, {} skipped, 0 contradictions, {} certificates verified",
        family.len(),
        report.rows.len(),
        report.skipped,
        report.certificates_verified
    ))
}

fn l_exponent(mut n: u64, l: u64) -> u64 {
    let mut e = 0;
    while n % l == 0 {
        n /= l;
        e += 1;
    }
    e
}

fn arithmetic() -> Check {
    for l in [2u64, 3, 4, 6, 10] {
        for n in 1..=100_000u64 {
            let d = decompose(n, l).map_err(err)?;
            ensure!(
                d.alpha % l != 0 && d.alpha * l.pow(d.k as u32) == n,
                "decompose({n}, {l}) = {d:?}"
            );
        }
    }
    const N: u64 = 10_000;
    for l in [2u64, 3, 4, 6] {
        let mut hits = vec![0u8; N as usize + 1];
        for r in a_set(l, N) {
            let mut p = r;
            while p <= N {
                hits[p as usize] += 1;
                ensure!(class_of(p, l).map_err(err)?.representative() == r, "class_of({p}, {l})");
                p *= l;
            }
        }
        ensure!(
            hits[1..].iter().all(|&h| h == 1),
            "classes do not partition [1, {N}] for l={l}"
        );
    }
    for l in [2u64, 4, 6, 12] {
        for n in 1..=20 {
            let m = offset_bound(l, n).map_err(err)?.m;
            for a in a_set(l, 2000) {
                for b in a_set(l, n) {
                    ensure!(l_exponent(a * b, l) <= m, "{a}*{b} exceeds l^{m} for l={l}, N={n}");
                }
            }
        }
    }
    // |u'| = 6, |v'| = 4, l = 4.
    ensure!(pair_offset_bound(6, 4, 4).map_err(err)? == 2, "pair offset bound");
    let mut cases = 0;
    for alpha in a_set(4, 200) {
        for k in 0..=5 {
            for i in a_set(4, 4) {
                let o = offset_of(i, 6, alpha, k, 4).map_err(err)?;
                let product = i as u128 * 6 * alpha as u128 * 4u128.pow(k as u32);
                ensure!(
                    o.c <= 2 && o.j % 4 != 0 && o.j as u128 * 4u128.pow(o.exponent as u32) == product,
                    "offset_of({i}, 6, {alpha}, {k}, 4) = {o:?}"
                );
                cases += 1;
            }
        }
    }
    Ok(format!("offset c <= 2 on {cases} cases"))
}

/// Golden mean admissibility read straight off the definition: no two
/// consecutive chain positions carry 1.
fn golden_mean_admissible(w: &[u8], l: usize) -> bool {
    (1..=w.len()).all(|i| i * l > w.len() || !(w[i - 1] == 1 && w[i * l - 1] == 1))
}

fn counting() -> Check {
    let gm = ShiftSpec::sft(2, &["11"]).map_err(err)?;
    let x = MultShift::new(gm.clone(), 2).map_err(err)?;
    for n in 1..=10u64 {
        let listed = x.enumerate_blocks(n).map_err(err)?;
        let counted = x.count_blocks(n).map_err(err)?;
        ensure!(
            counted == listed.len().into(),
            "count_blocks({n}) = {counted}, listed {}",
            listed.len()
        );
        let brute: Vec<Word> = (0u32..1 << n)
            .map(|bits| (0..n).map(|i| ((bits >> (n - 1 - i)) & 1) as u8).collect::<Vec<_>>())
            .filter(|w| golden_mean_admissible(w, 2))
            .map(Word::new)
            .collect();
        ensure!(brute == listed, "enumerate_blocks({n}) differs from brute force");
    }
    for n in 1..=20usize {
        let c = gm.count_blocks(n).map_err(err)?;
        ensure!(c == fib(n as u64), "|B_{n}| = {c}, fib = {}", fib(n as u64));
        ensure!(gm.blocks(n).map_err(err)?.len() == n_to_usize(&c), "B_{n} listing");
    }
    let brute4 = (0u32..16)
        .filter(|bits| golden_mean_admissible(&(0..4).map(|i| ((bits >> (3 - i)) & 1) as u8).collect::<Vec<_>>(), 2))
        .count();
    ensure!(brute4 == 10, "brute force over 16 words gives {brute4}");
    ensure!(x.count_blocks(4).map_err(err)? == 10u32.into(), "count_blocks(4)");
    Ok("count_blocks(golden mean, 2, 4) = 10 = brute force".into())
}

fn n_to_usize(n: &num_bigint::BigUint) -> usize {
    n.to_string().parse().unwrap()
}

fn dimension() -> Check {
    let s40 = dim_b_golden_mean(40);
    let s60 = dim_b_golden_mean(60);
    let diff = s60.partial_sum.abs_diff(&s40.partial_sum).to_f64();
    ensure!(diff < DIMENSION_CONVERGENCE, "|S60 - S40| = {diff:e}");
    ensure!(s60.partial_sum >= s40.partial_sum, "partial sums must increase");

    // Independent oracle: f64 logarithms summed from the smallest term up.
    let reversed: f64 = (1..=60u32)
        .rev()
        .map(|n| (fib(n as u64).to_string().parse::<f64>().unwrap()).ln() / 2f64.powi(n as i32))
        .sum::<f64>()
        / (2.0 * std::f64::consts::LN_2);
    let gap = (reversed - s60.value()).abs();
    ensure!(gap < DIMENSION_AGREEMENT, "forward vs reversed: {gap:e}");

    let s200 = dim_b_golden_mean(200);
    for t in [1u64, 2, 5, 10, 20, 40, 60, 100] {
        let st = dim_b_golden_mean(t);
        let rest = s200.partial_sum.abs_diff(&st.partial_sum);
        ensure!(rest <= tail_bound(t), "tail bound fails at T={t}");
        ensure!(st.tail_bound == tail_bound(t), "reported tail bound at T={t}");
    }
    ensure!(
        dim_b_golden_mean(1).partial_sum.abs_diff(&Fixed::dyadic(1, 2)).to_f64() < 1e-60,
        "first partial sum is 1/4"
    );
    Ok(format!(
        "value {:.15}, |S60 - S40| = {diff:.1e}, two-oracle gap {gap:.1e}",
        s60.value()
    ))
}

/// Naive model of one base shift: membership by direct scan.
enum NaiveBase {
    Sft(Vec<Vec<u8>>),
    Spacing(BTreeSet<u64>),
}

impl NaiveBase {
    /// Some point carries `constraints` (depth ↦ symbol). SFT prefixes get 6
    /// free continuation symbols, enough to reach a cycle when every
    /// forbidden word has length <= 2.
    fn feasible(&self, constraints: &BTreeMap<u64, u8>) -> bool {
        let depth = *constraints.keys().max().unwrap() as usize;
        let len = match self {
            NaiveBase::Sft(_) => depth + 6,
            NaiveBase::Spacing(_) => depth,
        };
        (0u32..1 << len).any(|bits| {
            let w: Vec<u8> = (0..len).map(|i| ((bits >> i) & 1) as u8).collect();
            if constraints.iter().any(|(&d, &s)| w[d as usize - 1] != s) {
                return false;
            }
            match self {
                NaiveBase::Sft(f) => f.iter().all(|fw| !w.windows(fw.len()).any(|x| x == &fw[..])),
                NaiveBase::Spacing(excluded) => {
                    let ones: Vec<usize> = (0..len).filter(|&i| w[i] == 1).collect();
                    ones.iter()
                        .enumerate()
                        .all(|(a, &i)| ones[a + 1..].iter().all(|&j| !excluded.contains(&((j - i) as u64))))
                }
            }
        })
    }
}

/// Positions grouped by `Λ`-class: representative ↦ (depth ↦ symbol).
fn by_class(cells: &BTreeMap<u64, u8>, l: u64) -> BTreeMap<u64, BTreeMap<u64, u8>> {
    let mut out: BTreeMap<u64, BTreeMap<u64, u8>> = BTreeMap::new();
    for (&p, &s) in cells {
        let e = l_exponent(p, l);
        out.entry(p / l.pow(e as u32)).or_default().insert(e + 1, s);
    }
    out
}

fn naive_admissible(base: &NaiveBase, u: &BTreeMap<u64, u8>, l: u64) -> bool {
    by_class(u, l).values().all(|c| base.feasible(c))
}

fn random_pattern(rng: &mut ChaCha8Rng, max_len: u64, max_support: usize) -> BTreeMap<u64, u8> {
    let len = rng.gen_range(1..=max_len);
    let mut cells = BTreeMap::new();
    cells.insert(len, rng.gen_range(0..2u8));
    if rng.gen_bool(0.5) {
        for p in 1..len {
            cells.insert(p, rng.gen_range(0..2u8));
        }
    } else {
        for _ in 1..rng.gen_range(1..=max_support) {
            cells.insert(rng.gen_range(1..=len), rng.gen_range(0..2u8));
        }
    }
    while cells.len() > max_support {
        let p = *cells.keys().next().unwrap();
        cells.remove(&p);
    }
    cells
}

fn oracle_exactness() -> Check {
    let sfts: &[&[&str]] = &[
        &[],
        &["11"],
        &["01"],
        &["10"],
        &["00", "11"],
        &["00", "10"],
        &["1"],
        &["01", "10"],
    ];
    let mut bases: Vec<(ShiftSpec, NaiveBase)> = sfts
        .iter()
        .map(|f| {
            (
                ShiftSpec::sft(2, f).unwrap(),
                NaiveBase::Sft(f.iter().map(|w| w.bytes().map(|b| b - b'0').collect()).collect()),
            )
        })
        .collect();
    bases.push((
        SpacingSpec::cofinite([1, 2]).unwrap().into(),
        NaiveBase::Spacing([1, 2].into()),
    ));
    bases.push((
        SpacingSpec::power_complement(2, 10).unwrap().into(),
        NaiveBase::Spacing([3, 12, 102].into()),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(ORACLE_SEED);
    let (mut instances, mut present) = (0, 0);
    while instances < ORACLE_INSTANCES {
        let (omega, naive) = &bases[rng.gen_range(0..bases.len())];
        let l = rng.gen_range(2..=3u64);
        let u = random_pattern(&mut rng, 8, 7);
        let v = random_pattern(&mut rng, 5, 12 - u.len());
        let x = MultShift::new(omega.clone(), l).map_err(err)?;
        let (pu, pv) = (
            Pattern::from_entries(u.clone()).map_err(err)?,
            Pattern::from_entries(v.clone()).map_err(err)?,
        );
        let adm_u = naive_admissible(naive, &u, l);
        let adm_v = naive_admissible(naive, &v, l);
        ensure!(
            adm_u == x.is_admissible(&pu).map_err(err)? && adm_v == x.is_admissible(&pv).map_err(err)?,
            "admissibility disagrees on {pu} / {pv} over {}",
            omega.describe()
        );
        if !adm_u || !adm_v {
            continue;
        }
        let alphas = a_set(l, 7);
        let alpha = alphas[rng.gen_range(0..alphas.len())];
        let k = rng.gen_range(0..=3u64);
        let q = *u.keys().max().unwrap() * alpha * l.pow(k as u32);
        let mut cells = u.clone();
        let mut clash = false;
        for (&j, &s) in &v {
            clash |= *cells.entry(q * j).or_insert(s) != s;
        }
        let classes = by_class(&cells, l);
        if classes.values().any(|c| *c.keys().max().unwrap() > 8) {
            continue;
        }
        let expected = !clash && classes.values().all(|c| naive.feasible(c));
        let found = exists_witness_exact(&x, &pu, &pv, alpha, k).map_err(err)?;
        ensure!(
            found.is_some() == expected,
            "{} l={l} u={pu} v={pv} alpha={alpha} k={k}: oracle {}, naive {expected}",
            omega.describe(),
            found.is_some()
        );
        if let Some(cert) = &found {
            verify(omega, cert).map_err(err)?;
        }
        present += usize::from(expected);
        instances += 1;
    }
    Ok(format!(
        "{instances} instances, {present} realizable, {} not",
        instances - present
    ))
}

fn main() {
    let results = [
        run(1, "worked-example regression", Duration::from_secs(10), worked_examples),
        run(
            2,
            "exhaustive equivalence campaign",
            Duration::from_secs(300),
            equivalence_campaign,
        ),
        run(3, "arithmetic suites", Duration::from_secs(30), arithmetic),
        run(4, "counting consistency", Duration::from_secs(10), counting),
        run(5, "dimension series", Duration::from_secs(1), dimension),
        run(6, "oracle exactness", Duration::from_secs(60), oracle_exactness),
    ];
    if !results.iter().all(|&ok| ok) {
        std::process::exit(1);
    }
}
