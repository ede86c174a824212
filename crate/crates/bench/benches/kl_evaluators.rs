use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spcauchy_bench::{run_latent_step_bench, BenchConfig};
use spcauchy_core::{kl, rho_match, KlMethod, SpCauchy, UnitVector};

fn evaluators(c: &mut Criterion) {
    let mut group = c.benchmark_group("kl");
    for d in [8, 128, 2048] {
        let rho = rho_match(d, 10.0).unwrap();
        for m in [
            KlMethod::Hybrid,
            KlMethod::Quadrature,
            KlMethod::Combined,
            KlMethod::Series,
        ] {
            group.bench_with_input(BenchmarkId::new(m.name(), d), &d, |b, &d| {
                b.iter(|| kl(black_box(d), black_box(rho), m).unwrap().value)
            });
        }
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample");
    for d in [8, 512] {
        let q = SpCauchy::new(UnitVector::north(d).unwrap(), 0.9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        group.bench_function(BenchmarkId::from_parameter(d), |b| {
            b.iter(|| q.sample(&mut rng).unwrap())
        });
    }
    group.finish();
}

fn latent_step(c: &mut Criterion) {
    let config = BenchConfig {
        dims: vec![64],
        warmup_iters: 0,
        measured_iters: 1,
        ..BenchConfig::default()
    };
    let mut group = c.benchmark_group("latent_step");
    group.sample_size(20);
    for m in [KlMethod::Hybrid, KlMethod::Quadrature] {
        group.bench_function(m.name(), |b| b.iter(|| run_latent_step_bench(&config, m)));
    }
    group.finish();
}

criterion_group!(benches, evaluators, sampling, latent_step);
criterion_main!(benches);
