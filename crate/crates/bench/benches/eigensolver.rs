use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qrd_core::{
    converged_ground_state, from_dimensionless, lowest_eigenpairs, universal_ode_solve,
    ConvergenceOptions, FockTruncation, GridSpec, HamiltonianSpec, SystemShape,
};

fn near_critical(eta: f64) -> HamiltonianSpec {
    HamiltonianSpec::full(
        from_dimensionless(1.0, 0.5, 0.5, eta).unwrap(),
        SystemShape::dimer(),
    )
}

fn build(c: &mut Criterion) {
    let spec = near_critical(128.0);
    let mut g = c.benchmark_group("build");
    for n in [40, 80] {
        let trunc = FockTruncation::new(n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &trunc, |b, &t| {
            b.iter(|| spec.build(black_box(t)).unwrap())
        });
    }
    g.finish();
}

fn matvec(c: &mut Criterion) {
    let spec = near_critical(128.0);
    let mut g = c.benchmark_group("matvec");
    for n in [40, 80] {
        let op = spec.build(FockTruncation::new(n).unwrap()).unwrap();
        let x = vec![1.0; op.dim()];
        let mut y = vec![0.0; op.dim()];
        g.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| op.apply(black_box(&x), &mut y))
        });
    }
    g.finish();
}

fn lanczos(c: &mut Criterion) {
    let spec = near_critical(128.0);
    let op = spec.build(FockTruncation::new(40).unwrap()).unwrap();
    let mut g = c.benchmark_group("lanczos");
    g.sample_size(10);
    g.bench_function("k2_n40", |b| {
        b.iter(|| lowest_eigenpairs(black_box(&op), 2, 1e-9).unwrap())
    });
    g.finish();
}

fn convergence(c: &mut Criterion) {
    let spec = near_critical(64.0);
    let opts = ConvergenceOptions::default();
    let mut g = c.benchmark_group("converged_ground_state");
    g.sample_size(10);
    g.bench_function("eta64", |b| {
        b.iter(|| converged_ground_state(black_box(&spec), &opts).unwrap())
    });
    g.finish();
}

fn ode(c: &mut Criterion) {
    c.bench_function("universal_ode_v0", |b| {
        b.iter(|| universal_ode_solve(black_box(0.0), GridSpec::for_v(0.0)).unwrap())
    });
}

criterion_group!(benches, build, matvec, lanczos, convergence, ode);
criterion_main!(benches);
