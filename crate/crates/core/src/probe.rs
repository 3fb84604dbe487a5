//! Growth experiments: how the Hilbert-embeddability obstruction of
//! sampled finite metric spaces scales with instance size.
//!
//! Each probe row certifies one finite metric space and records the
//! magnitude of its most negative eigenvalue, that magnitude normalized by
//! the spectral radius, and the distortion of the best-effort Euclidean
//! embedding. Euclidean samples are the negative control (the obstruction
//! must vanish); the l^p and diagram-space families exhibit the
//! obstruction and must agree with each other because the diagram
//! embedding is an isometry.

use crate::diagram::Order;
use crate::embedding::{EmbeddingSpec, PointSet};
use crate::error::{Error, Result};
use crate::hilbert::{certify, mds_embed, FiniteMetricSpace, DEFAULT_SPECTRAL_TOL};
use crate::wasserstein::distance_matrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::str::FromStr;

/// Default cap on probe instance sizes.
pub const DEFAULT_PROBE_CAP: usize = 256;

/// Ambient dimension of the sampled random families.
pub const PROBE_DIM: usize = 4;

/// The metric-space families the probe can sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Random points with l^2 distances; always embeddable, the negative
    /// control.
    Euclidean,
    /// Random points with l^p distances.
    Lp,
    /// Vertices of the unit cube with l^p distances, enumerated in binary
    /// order (seed-independent).
    Hypercube,
    /// The same random points as [`Family::Lp`], pushed through the
    /// diagram-space embedding and measured with the Wasserstein distance.
    ViaDiagrams,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Family::Euclidean),
            "lp" => Ok(Family::Lp),
            "hypercube" => Ok(Family::Hypercube),
            "via-diagrams" => Ok(Family::ViaDiagrams),
            other => Err(Error::Parse {
                line: 0,
                msg: format!(
                    "unknown family `{other}`: expected euclidean, lp, hypercube, or via-diagrams"
                ),
            }),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Family::Euclidean => "euclidean",
            Family::Lp => "lp",
            Family::Hypercube => "hypercube",
            Family::ViaDiagrams => "via-diagrams",
        };
        write!(f, "{name}")
    }
}

/// One row of the growth table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRow {
    pub n: usize,
    /// `|worst_negative|` of the certificate.
    pub worst_negative: f64,
    /// `|worst_negative|` normalized by the spectral radius.
    pub ratio: f64,
    pub mds_distortion: f64,
}

/// Sample `n` points uniformly from `[-1, 1]^PROBE_DIM`. The RNG stream is
/// keyed by instance size, so each row depends only on `(seed, n)` and
/// rows can be evaluated in any order.
fn sample_points(seed: u64, n: usize) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n as u64);
    let points = (0..n)
        .map(|_| (0..PROBE_DIM).map(|_| rng.random_range(-1.0..=1.0)).collect())
        .collect();
    PointSet::new(points).expect("sampled points are finite and uniform")
}

/// The first `n` vertices of the unit cube in the smallest dimension that
/// holds them, enumerated in binary counting order.
fn hypercube_points(n: usize) -> PointSet {
    let mut dim = 1usize;
    while (1usize << dim) < n {
        dim += 1;
    }
    let points = (0..n)
        .map(|i| (0..dim).map(|b| ((i >> b) & 1) as f64).collect())
        .collect();
    PointSet::new(points).expect("cube vertices are finite and uniform")
}

fn family_metric(family: Family, order: Order, n: usize, seed: u64) -> Result<FiniteMetricSpace> {
    match family {
        Family::Euclidean => {
            let points = sample_points(seed, n);
            let euclid = Order::new(2.0).expect("2 is a valid order");
            FiniteMetricSpace::from_lp_points(&points, euclid)
        }
        Family::Lp => FiniteMetricSpace::from_lp_points(&sample_points(seed, n), order),
        Family::Hypercube => FiniteMetricSpace::from_lp_points(&hypercube_points(n), order),
        Family::ViaDiagrams => {
            let spec = EmbeddingSpec::new(sample_points(seed, n), order);
            distance_matrix(&spec.embed(), order)
        }
    }
}

/// Certify one family instance per requested size. Sizes above `cap` are
/// rejected before any work happens.
pub fn distortion_probe(
    family: Family,
    order: Order,
    sizes: &[usize],
    seed: u64,
    cap: usize,
) -> Result<Vec<GrowthRow>> {
    for &n in sizes {
        if n > cap {
            return Err(Error::SizeLimitExceeded { size: n, limit: cap });
        }
        if n == 0 {
            return Err(Error::EmptyInput("probe size 0"));
        }
    }
    sizes
        .iter()
        .map(|&n| {
            let ms = family_metric(family, order, n, seed)?;
            let cert = certify(&ms, DEFAULT_SPECTRAL_TOL);
            let (_, report) = mds_embed(&ms);
            Ok(GrowthRow {
                n,
                worst_negative: cert.worst_negative.abs(),
                ratio: cert.normalized_obstruction(),
                mds_distortion: report.multiplicative_distortion,
            })
        })
        .collect()
}

/// Render the growth table CSV, header `n,worst_negative,ratio,mds_distortion`.
pub fn growth_table_csv(rows: &[GrowthRow]) -> String {
    let mut out = String::from("n,worst_negative,ratio,mds_distortion\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.n, row.worst_negative, row.ratio, row.mds_distortion
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(p: f64) -> Order {
        Order::new(p).unwrap()
    }

    #[test]
    fn euclidean_family_has_no_obstruction() {
        let rows = distortion_probe(Family::Euclidean, order(4.0), &[4, 8, 16], 42, 256).unwrap();
        for row in rows {
            assert!(row.ratio < 1e-9, "n={} ratio={}", row.n, row.ratio);
            assert!((row.mds_distortion - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn diagram_family_matches_direct_lp_family() {
        let o = order(4.0);
        let direct = distortion_probe(Family::Lp, o, &[4, 6], 7, 256).unwrap();
        let via = distortion_probe(Family::ViaDiagrams, o, &[4, 6], 7, 256).unwrap();
        for (a, b) in direct.iter().zip(&via) {
            assert_eq!(a.n, b.n);
            assert!((a.ratio - b.ratio).abs() < 1e-9, "{a:?} vs {b:?}");
            assert!((a.worst_negative - b.worst_negative).abs() < 1e-9);
        }
    }

    #[test]
    fn rows_are_reproducible_from_seed() {
        let o = order(3.0);
        let a = distortion_probe(Family::Lp, o, &[4, 8], 99, 256).unwrap();
        let b = distortion_probe(Family::Lp, o, &[4, 8], 99, 256).unwrap();
        assert_eq!(a, b);
        assert_eq!(growth_table_csv(&a), growth_table_csv(&b));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            distortion_probe(Family::Euclidean, order(2.0), &[4, 512], 1, 256),
            Err(Error::SizeLimitExceeded { size: 512, limit: 256 })
        ));
    }

    #[test]
    fn hypercube_points_enumerate_binary_vertices() {
        let cube = hypercube_points(4);
        assert_eq!(cube.dim(), 2);
        assert_eq!(cube.point(0), &[0.0, 0.0]);
        assert_eq!(cube.point(3), &[1.0, 1.0]);
        let eight = hypercube_points(5);
        assert_eq!(eight.dim(), 3);
    }

    #[test]
    fn family_names_round_trip() {
        for f in [
            Family::Euclidean,
            Family::Lp,
            Family::Hypercube,
            Family::ViaDiagrams,
        ] {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
        assert!("nope".parse::<Family>().is_err());
    }

    #[test]
    fn csv_has_expected_header() {
        let rows = vec![GrowthRow {
            n: 4,
            worst_negative: 0.0,
            ratio: 0.0,
            mds_distortion: 1.0,
        }];
        assert_eq!(
            growth_table_csv(&rows),
            "n,worst_negative,ratio,mds_distortion\n4,0,0,1\n"
        );
    }
}
