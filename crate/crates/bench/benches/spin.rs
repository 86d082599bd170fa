use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dipsqueeze::{evolve, qfi_max, squeezing_parameter, DickeState, EvolutionInputs};
use dipsqueeze_bench::twisted_state;
use std::hint::black_box;

fn evolution(c: &mut Criterion) {
    let mut g = c.benchmark_group("evolve");
    let inputs = EvolutionInputs::new(0.0, 0.0148, 3e-4, 1e-5, 50.0).unwrap();
    for n in [10usize, 50, 100] {
        let css = DickeState::css_plus_x(n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &css, |b, css| {
            b.iter(|| evolve(black_box(css), &inputs).unwrap())
        });
    }
    g.finish();
}

fn metrology(c: &mut Criterion) {
    let mut g = c.benchmark_group("metrology");
    g.sample_size(20);
    for n in [10usize, 50, 100] {
        let rho = twisted_state(n).normalize().unwrap();
        g.bench_with_input(BenchmarkId::new("qfi_max", n), &rho, |b, r| b.iter(|| qfi_max(black_box(r)).unwrap()));
        g.bench_with_input(BenchmarkId::new("squeezing", n), &rho, |b, r| {
            b.iter(|| squeezing_parameter(black_box(r)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, evolution, metrology);
criterion_main!(benches);
