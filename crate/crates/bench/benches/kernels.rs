use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dipsqueeze::reservoir::Dispersion;
use dipsqueeze_bench::standard_solver;
use std::hint::black_box;

fn kernels(c: &mut Criterion) {
    let s = standard_solver(-1.0);
    let mut g = c.benchmark_group("kernels");
    g.sample_size(20);
    for t in [1.0, 10.0, 100.0] {
        g.bench_with_input(BenchmarkId::new("delta", t), &t, |b, &t| b.iter(|| s.delta(black_box(t)).unwrap()));
        g.bench_with_input(BenchmarkId::new("gamma", t), &t, |b, &t| b.iter(|| s.gamma(black_box(t)).unwrap()));
    }
    g.bench_function("delta_infinity", |b| b.iter(|| s.delta_infinity().unwrap()));
    g.finish();
}

fn spectral(c: &mut Criterion) {
    let s = standard_solver(-1.0);
    let d = Dispersion::new(s.params(), s.k_max()).unwrap();
    c.bench_function("spectral_density", |b| b.iter(|| d.spectral_density(black_box(1.3)).unwrap()));
}

criterion_group!(benches, kernels, spectral);
criterion_main!(benches);
