use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use multishift_bench::{block, cofinite_spacing, golden_mean, sft_fixtures};
use multishift_core::oracle::{exists_witness_exact, probe_directional_q, probe_transitive_x};
use multishift_core::{MultShift, Property, SearchBudget};

fn decide(c: &mut Criterion) {
    let mut g = c.benchmark_group("decide");
    for (name, spec) in sft_fixtures() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &spec, |b, s| {
            b.iter(|| Property::ALL.map(|p| s.decide(p).unwrap().value))
        });
    }
    g.finish();
}

fn exact(c: &mut Criterion) {
    let mut g = c.benchmark_group("exists_witness_exact");
    let gm = golden_mean(2);
    for k in [0u64, 8, 32] {
        g.bench_with_input(BenchmarkId::new("golden_mean", k), &k, |b, &k| {
            b.iter(|| exists_witness_exact(&gm, &block("0100"), &block("1001"), 3, black_box(k)).unwrap())
        });
    }
    let sp = MultShift::new(cofinite_spacing(), 6).unwrap();
    g.bench_function("cofinite_spacing_l6", |b| {
        b.iter(|| exists_witness_exact(&sp, &block("11111011"), &block("11111"), 243, black_box(0)).unwrap())
    });
    g.finish();
}

fn count(c: &mut Criterion) {
    let mut g = c.benchmark_group("count_blocks");
    for l in [2u64, 3] {
        let x = golden_mean(l);
        for n in [16u64, 256, 4096] {
            g.bench_with_input(BenchmarkId::new(format!("golden_mean_l{l}"), n), &n, |b, &n| {
                b.iter(|| x.count_blocks(n).unwrap())
            });
        }
    }
    g.finish();
}

fn probe(c: &mut Criterion) {
    let mut g = c.benchmark_group("probe");
    g.sample_size(10);
    let budget = SearchBudget::default();
    let gm = golden_mean(2);
    g.bench_function("transitive_golden_mean", |b| {
        b.iter(|| probe_transitive_x(&gm, &budget).unwrap())
    });
    let alt = MultShift::new(sft_fixtures()[1].1.clone(), 2).unwrap();
    g.bench_function("directional_alternating", |b| {
        b.iter(|| probe_directional_q(&alt, 2, &block("0110"), &block("1011"), &budget).unwrap())
    });
    g.finish();
}

criterion_group!(benches, decide, exact, count, probe);
criterion_main!(benches);
