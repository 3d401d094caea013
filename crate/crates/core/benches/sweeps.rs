use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use loewner::analysis::{geometric_grid, harmonic_measures, monotonicity_report, AnalysisConfig};
use loewner::dynamics::{trace_point, Driving, SolverConfig};
use loewner::sweep::{map_par, map_seq};

fn trace_grid(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let mut group = c.benchmark_group("trace_grid");
    group.sample_size(10);
    for n in [16, 64] {
        let grid = geometric_grid(1e-4, 1e-2, n);
        let point = |t: &f64| trace_point(*t, Driving::CubeRoot, &cfg).unwrap().gamma;
        group.bench_with_input(BenchmarkId::new("sequential", n), &grid, |b, g| b.iter(|| map_seq(black_box(g), point)));
        group.bench_with_input(BenchmarkId::new("parallel", n), &grid, |b, g| b.iter(|| map_par(black_box(g), point)));
    }
    group.finish();
}

fn harmonic_scan(c: &mut Criterion) {
    let cfg = AnalysisConfig::default();
    let grid: Vec<f64> = (0..24).map(|k| 1e-3 * 0.5f64.powi(k)).collect();
    let point = |t: &f64| harmonic_measures(*t, &cfg).unwrap().ratio;
    let mut group = c.benchmark_group("harmonic_scan");
    group.sample_size(10);
    group.bench_function("sequential", |b| b.iter(|| map_seq(black_box(&grid), point)));
    group.bench_function("parallel", |b| b.iter(|| map_par(black_box(&grid), point)));
    group.finish();
}

fn ordering_lattice(c: &mut Criterion) {
    let cfg = AnalysisConfig::default();
    let lattice = loewner::analysis::default_lattice();
    let point = |&(t1, t0, t): &(f64, f64, f64)| monotonicity_report(t1, t0, t, &cfg).unwrap().holds();
    let mut group = c.benchmark_group("ordering_lattice");
    group.sample_size(10);
    group.bench_function("sequential", |b| b.iter(|| map_seq(black_box(&lattice), point)));
    group.bench_function("parallel", |b| b.iter(|| map_par(black_box(&lattice), point)));
    group.finish();
}

criterion_group!(benches, trace_grid, harmonic_scan, ordering_lattice);
criterion_main!(benches);
