//! Solver scaling benchmarks: entity count, observations per entity, and
//! cluster count, each at a fixed iteration budget.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cluspath::data::HyperParams;
use cluspath::solver::{fit, SolverConfig};
use cluspath::synth::{generate, SynthConfig};

fn params(k: usize) -> HyperParams {
    HyperParams::new(0.0, 5e-4, 2.0, 1.0, 0.5, 0.5, k).unwrap()
}

fn bench_entities(c: &mut Criterion) {
    let mut group = c.benchmark_group("entities");
    for p in [10, 20, 40] {
        let cfg = SynthConfig { entities: p, phases: 4, seed: 1, ..SynthConfig::default() };
        let (ds, _) = generate(&cfg).unwrap();
        let hp = params(4);
        let solver_cfg = SolverConfig { max_iterations: 5, ..SolverConfig::with_seed(0) };
        group.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, _| {
            b.iter(|| fit(&ds, &hp, &solver_cfg, None).unwrap())
        });
    }
    group.finish();
}

fn bench_series_length(c: &mut Criterion) {
    let mut group = c.benchmark_group("observations_per_entity");
    for obs in [2, 4, 8] {
        let cfg =
            SynthConfig { entities: 10, phases: 4, obs_per_phase: obs, seed: 1, ..SynthConfig::default() };
        let (ds, _) = generate(&cfg).unwrap();
        let hp = params(4);
        let solver_cfg = SolverConfig { max_iterations: 5, ..SolverConfig::with_seed(0) };
        group.bench_with_input(BenchmarkId::from_parameter(obs), &obs, |b, _| {
            b.iter(|| fit(&ds, &hp, &solver_cfg, None).unwrap())
        });
    }
    group.finish();
}

fn bench_clusters(c: &mut Criterion) {
    let mut group = c.benchmark_group("clusters");
    let cfg = SynthConfig { entities: 20, phases: 4, seed: 1, ..SynthConfig::default() };
    let (ds, _) = generate(&cfg).unwrap();
    for k in [2, 4, 8] {
        let hp = params(k);
        let solver_cfg = SolverConfig { max_iterations: 5, ..SolverConfig::with_seed(0) };
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, _| {
            b.iter(|| fit(&ds, &hp, &solver_cfg, None).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_entities, bench_series_length, bench_clusters);
criterion_main!(benches);
