use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dqes_bench::{heisenberg, maxcut, random_state};
use dqes_core::{build_full_mub_set, molecule_fixture, run_full_dqes, run_partial_dqes};
use std::hint::black_box;

fn mub_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("mub_build");
    for n in 1..=3 {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| build_full_mub_set(black_box(n)).unwrap())
        });
    }
    g.finish();
}

fn expectation(c: &mut Criterion) {
    let mut g = c.benchmark_group("expectation");
    for n in [4, 8, 12] {
        let obs = heisenberg(n);
        let psi = random_state(n, 1);
        g.bench_with_input(BenchmarkId::new("exact", n), &n, |b, _| {
            b.iter(|| obs.expectation(black_box(&psi)).unwrap())
        });
    }
    let obs = heisenberg(6);
    let psi = random_state(6, 2);
    g.bench_function("sampled_6q_1e4", |b| {
        b.iter(|| obs.expectation_sampled(black_box(&psi), 10_000, 3).unwrap())
    });
    g.finish();
}

fn sweeps(c: &mut Criterion) {
    let mut g = c.benchmark_group("sweep");
    g.sample_size(20);
    let h2 = molecule_fixture("H2_075").unwrap();
    let set2 = build_full_mub_set(2).unwrap();
    g.bench_function("full_h2", |b| {
        b.iter(|| run_full_dqes(black_box(&h2), &set2).unwrap())
    });
    let mc8 = maxcut(8);
    g.bench_function("partial_maxcut8_k3", |b| {
        b.iter(|| run_partial_dqes(black_box(&mc8), 3).unwrap())
    });
    let mc10 = maxcut(10);
    g.bench_function("partial_maxcut10_k2", |b| {
        b.iter(|| run_partial_dqes(black_box(&mc10), 2).unwrap())
    });
    g.finish();
}

criterion_group!(benches, mub_build, expectation, sweeps);
criterion_main!(benches);
