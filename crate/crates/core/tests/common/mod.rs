//! Seeded generators shared by the integration test suites.

// each test target compiles its own copy and uses a different subset
#![allow(dead_code)]

use pdwass::{PersistenceDiagram, PointSet};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A diagram with up to `max_points` points, births in [-5, 5) and
/// persistence gaps in [0.05, 4).
pub fn random_diagram(rng: &mut ChaCha8Rng, max_points: usize) -> PersistenceDiagram {
    let n = rng.random_range(0..=max_points);
    PersistenceDiagram::from_pairs((0..n).map(|_| {
        let birth: f64 = rng.random_range(-5.0..5.0);
        let gap: f64 = rng.random_range(0.05..4.0);
        (birth, birth + gap)
    }))
    .expect("generated points satisfy birth < death")
}

/// `n` points of dimension `d` with coordinates in [-half_width, half_width].
pub fn random_point_set(rng: &mut ChaCha8Rng, n: usize, d: usize, half_width: f64) -> PointSet {
    PointSet::new(
        (0..n)
            .map(|_| {
                (0..d)
                    .map(|_| rng.random_range(-half_width..=half_width))
                    .collect()
            })
            .collect(),
    )
    .expect("generated point sets are uniform")
}

/// A family of equal-length vectors with geometrically decaying
/// coordinates, so truncation cuts land strictly inside the support.
pub fn decaying_vectors(rng: &mut ChaCha8Rng, count: usize, len: usize) -> Vec<Vec<f64>> {
    let base: f64 = rng.random_range(0.4..0.9);
    (0..count)
        .map(|_| {
            (0..len)
                .map(|k| {
                    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                    let u: f64 = rng.random_range(0.2..1.5);
                    sign * u * base.powi(k as i32 + 1)
                })
                .collect()
        })
        .collect()
}

/// The 2^d vertices of the unit cube in binary counting order.
pub fn hypercube(d: usize) -> PointSet {
    PointSet::new(
        (0..(1usize << d))
            .map(|i| (0..d).map(|b| ((i >> b) & 1) as f64).collect())
            .collect(),
    )
    .expect("cube vertices are uniform")
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
