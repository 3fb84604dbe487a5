//! Timing for the certificate pipeline: distance matrix construction,
//! double centering, and the symmetric eigendecomposition.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pdwass::{certify, mds_embed, FiniteMetricSpace, Order, PointSet, DEFAULT_SPECTRAL_TOL};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn random_metric(n: usize) -> FiniteMetricSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let points = PointSet::new(
        (0..n)
            .map(|_| (0..4).map(|_| rng.random_range(-1.0..=1.0)).collect())
            .collect(),
    )
    .unwrap();
    FiniteMetricSpace::from_lp_points(&points, Order::new(4.0).unwrap()).unwrap()
}

fn bench_certify(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify");
    for n in [16usize, 64, 128] {
        let ms = random_metric(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| certify(black_box(&ms), DEFAULT_SPECTRAL_TOL).worst_negative)
        });
    }
    group.finish();
}

fn bench_mds(c: &mut Criterion) {
    let mut group = c.benchmark_group("mds_embed");
    for n in [16usize, 64] {
        let ms = random_metric(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| mds_embed(black_box(&ms)).1.multiplicative_distortion)
        });
    }
    group.finish();
}

criterion_group!(benches, bench_certify, bench_mds);
criterion_main!(benches);
