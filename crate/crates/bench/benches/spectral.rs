use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qwpath_bench::{walk_of_size, SIZES};
use qwpath_core::chain::chain_from_coins;
use qwpath_core::distribution::{time_average_spectral, time_average_theorem};
use qwpath_core::evolution::cesaro_average;
use qwpath_core::spectra::{eigensolve_chain, lift_walk_eigenpairs, transition_eigenvalues_bisection};
use qwpath_core::StateVector;

fn eigensolve(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigensolve_chain");
    for n in SIZES {
        let chain = chain_from_coins(&walk_of_size(n, 1));
        group.bench_with_input(BenchmarkId::new("ql", n), &chain, |b, chain| {
            b.iter(|| eigensolve_chain(black_box(chain)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("bisection", n), &chain, |b, chain| {
            b.iter(|| transition_eigenvalues_bisection(black_box(chain)))
        });
    }
    group.finish();
}

fn lift_and_average(c: &mut Criterion) {
    let mut group = c.benchmark_group("time_average");
    for n in [8, 32, 128] {
        let spec = walk_of_size(n, 2);
        let spectrum = eigensolve_chain(&chain_from_coins(&spec)).unwrap();
        group.bench_with_input(BenchmarkId::new("lift", n), &n, |b, _| {
            b.iter(|| lift_walk_eigenpairs(black_box(&spec), black_box(&spectrum)).unwrap())
        });
        let ws = lift_walk_eigenpairs(&spec, &spectrum).unwrap();
        group.bench_with_input(BenchmarkId::new("spectral", n), &n, |b, _| {
            b.iter(|| time_average_spectral(black_box(&ws)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("theorem", n), &n, |b, _| {
            b.iter(|| time_average_theorem(black_box(&spectrum), spec.nu1(), spec.nu2()).unwrap())
        });
    }
    group.finish();
}

fn cesaro(c: &mut Criterion) {
    let mut group = c.benchmark_group("cesaro");
    group.sample_size(10);
    for n in [8, 64] {
        let spec = walk_of_size(n, 3);
        let psi = StateVector::origin(spec.size());
        group.bench_with_input(BenchmarkId::new("steps_10000", n), &n, |b, _| {
            b.iter(|| cesaro_average(black_box(&spec), &psi, 10_000).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, eigensolve, lift_and_average, cesaro);
criterion_main!(benches);
