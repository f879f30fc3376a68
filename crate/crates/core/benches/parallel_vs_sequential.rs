//! Compares the rayon-backed and sequential execution of the
//! data-parallel loops: Monte-Carlo estimator audits, the Gaussian
//! identity sampler, and multi-seed zero-order solves. Both modes produce
//! bit-identical results; only wall-clock time differs. Run the
//! sequential-only build with `--no-default-features`.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use gne_core::experiment::run_zero_order_seeds;
use gne_core::game::QuadraticGame;
use gne_core::kkt::{assemble, KktSystem};
use gne_core::numerics::{gaussian_identity_check, RngStream};
use gne_core::trace::TraceOptions;
use gne_core::verification::estimator_audit;
use gne_core::zero_order::{StepSchedule, ZoConfig};
use gne_core::Parallelism;

fn paper() -> (QuadraticGame, KktSystem) {
    let game =
        QuadraticGame::from_json_str(include_str!("../../../fixtures/paper_example.json")).unwrap();
    let sys = assemble(&game).unwrap();
    (game, sys)
}

fn modes() -> Vec<(&'static str, Parallelism)> {
    let mut modes = vec![("sequential", Parallelism::Sequential)];
    #[cfg(feature = "parallel")]
    modes.push(("rayon", Parallelism::Rayon));
    modes
}

fn bench_estimator_audit(c: &mut Criterion) {
    let (game, sys) = paper();
    let z = sys.zeros();
    let mut group = c.benchmark_group("estimator_audit_20k_rounds");
    group.sample_size(10);
    for (name, par) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| {
                let report = estimator_audit(&game, &sys, &z, 0.05, 0.05, 1, 20_000, par).unwrap();
                black_box(report.pass)
            })
        });
    }
    group.finish();
}

fn bench_identity_sampler(c: &mut Criterion) {
    let rng = RngStream::new(2);
    let a = [0.3, -0.2, 0.9, 0.1];
    let b_vec = [-0.5, 0.4, 0.2, 0.8];
    let mut group = c.benchmark_group("gaussian_identities_200k_samples");
    group.sample_size(10);
    for (name, par) in modes() {
        group.bench_function(name, |bch| {
            bch.iter(|| {
                let report =
                    gaussian_identity_check(&a, &b_vec, 0, 2, 2, 200_000, &rng, par).unwrap();
                black_box(report.samples)
            })
        });
    }
    group.finish();
}

fn bench_multi_seed_solve(c: &mut Criterion) {
    let (game, sys) = paper();
    let cfg = ZoConfig {
        sigma: 0.05,
        delta: 0.05,
        schedule: StepSchedule::paper_example(),
        max_iters: 1_000,
        seed: 0,
    };
    let seeds: Vec<u64> = (0..8).collect();
    let opts = TraceOptions::every(100);
    let mut group = c.benchmark_group("zero_order_8_seeds_1k_iters");
    group.sample_size(10);
    for (name, par) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| {
                let outcomes =
                    run_zero_order_seeds(&game, &sys, &sys.zeros(), &cfg, &seeds, &opts, par);
                black_box(outcomes.len())
            })
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_estimator_audit,
    bench_identity_sampler,
    bench_multi_seed_solve
);
criterion_main!(benches);
