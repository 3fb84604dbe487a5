//! Isometric embedding of finite l^p point sets into diagram space.
//!
//! Each d-dimensional point becomes a d-point diagram: coordinate k rides
//! its own "rail" with birth `2c(k-1)` (1-based k), and the coordinate
//! value offsets the death, `2c(k+1) + a_k`. The separation constant `c`
//! exceeds both every coordinate magnitude and every pairwise l^p
//! distance, which forces the optimal matching between two embedded
//! diagrams to pair rail k with rail k: deleting a point costs more than
//! `3c/2` and crossing rails costs at least `2c`, while the rail-by-rail
//! matching costs exactly the l^p distance of the source points (< c).
//!
//! The head/tail projections and [`choose_truncation`] handle the
//! finite-support reduction: picking the cut m with every tail norm at
//! most 1/2 keeps truncated pairwise distances within 1 of the originals.

use crate::diagram::{matching_cost, DiagramPoint, Order, PersistenceDiagram};
use crate::error::{Error, Result};
use crate::wasserstein::{for_each_partial_matching, wasserstein};

/// Enumeration guard for [`EmbeddingSpec::deviant_matching_bounds`].
pub const DEVIANT_ENUM_LIMIT: usize = 4;

/// Default relative tolerance for isometry verification.
pub const DEFAULT_ISOMETRY_TOL: f64 = 1e-9;

/// A finite set of d-dimensional real vectors with uniform dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Vec<f64>>,
    dim: usize,
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput("point set"));
        }
        let dim = points[0].len();
        for (row, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::Parse {
                    line: row + 1,
                    msg: format!("ragged row: {} coordinates, expected {}", p.len(), dim),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self { points, dim })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Parse the point-set CSV format: one vector per line, comma-separated
    /// coordinates, uniform row length. Comments (`#`) and blank lines are
    /// ignored. Errors carry 1-based line numbers over the raw file.
    pub fn from_csv_str(s: &str) -> Result<Self> {
        let mut points = Vec::new();
        let mut dim: Option<usize> = None;
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let coords = trimmed
                .split(',')
                .map(|f| {
                    f.trim().parse::<f64>().map_err(|_| Error::Parse {
                        line,
                        msg: format!("invalid number `{}`", f.trim()),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if coords.iter().any(|x| !x.is_finite()) {
                return Err(Error::Parse {
                    line,
                    msg: "coordinates must be finite".to_string(),
                });
            }
            match dim {
                None => dim = Some(coords.len()),
                Some(d) if d != coords.len() => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("ragged row: {} coordinates, expected {}", coords.len(), d),
                    });
                }
                _ => {}
            }
            points.push(coords);
        }
        if points.is_empty() {
            return Err(Error::EmptyInput("point set"));
        }
        let dim = dim.unwrap();
        Ok(Self { points, dim })
    }
}

/// l^p distance between two equal-length coordinate slices.
pub fn lp_distance(x: &[f64], y: &[f64], order: Order) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    order.root(
        x.iter()
            .zip(y)
            .map(|(a, b)| order.pow((a - b).abs()))
            .sum(),
    )
}

fn linf_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// The separation constant `c = 1 + max{ linf norms, pairwise l^p
/// distances }`. Any strict majorant works; the `+1` keeps diagram
/// coordinates small, which limits float error (they grow like `2cd`).
pub fn embedding_constant(a: &PointSet, order: Order) -> f64 {
    let mut max = 0.0f64;
    for p in a.points() {
        max = max.max(linf_norm(p));
    }
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            max = max.max(lp_distance(a.point(i), a.point(j), order));
        }
    }
    1.0 + max
}

/// Embed a single point as a d-point diagram with separation constant `c`.
/// Rail k (0-based) carries `(2ck, 2c(k+2) + a_k)`; the gap `4c + a_k`
/// stays above `3c`, so `birth < death` always holds.
pub fn embed_point(point: &[f64], c: f64) -> PersistenceDiagram {
    let points = point
        .iter()
        .enumerate()
        .map(|(k, &coord)| {
            let rail = k as f64;
            DiagramPoint::new(2.0 * c * rail, 2.0 * c * (rail + 2.0) + coord)
                .expect("gap 4c + a_k > 3c > 0")
        })
        .collect();
    PersistenceDiagram::new(points)
}

/// A point set bundled with its order and separation constant; the unit
/// that the isometry checks operate on.
#[derive(Debug, Clone)]
pub struct EmbeddingSpec {
    source: PointSet,
    order: Order,
    c: f64,
}

/// Per-pair outcome of an isometry verification.
#[derive(Debug, Clone, Copy)]
pub struct PairResidual {
    pub i: usize,
    pub j: usize,
    /// l^p distance of the source points.
    pub expected: f64,
    /// Wasserstein distance of the embedded diagrams.
    pub actual: f64,
    /// Relative error between the two.
    pub residual: f64,
}

#[derive(Debug, Clone, Default)]
pub struct IsometryReport {
    pub residuals: Vec<PairResidual>,
    pub max_residual: f64,
}

/// Summary of the exhaustive check over non-identity matchings between one
/// embedded pair.
#[derive(Debug, Clone)]
pub struct DeviantReport {
    pub c: f64,
    pub matchings_checked: usize,
    /// Minimum cost over every non-identity matching; exceeds `c`.
    pub min_cost: f64,
    /// Minimum over matchings that leave an index unmatched; exceeds `3c/2`.
    pub min_unmatched_cost: Option<f64>,
    /// Minimum over matchings that pair rail k with rail k' != k; at least `2c`.
    pub min_mismatched_cost: Option<f64>,
}

fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

impl EmbeddingSpec {
    pub fn new(source: PointSet, order: Order) -> Self {
        let c = embedding_constant(&source, order);
        Self { source, order, c }
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn source(&self) -> &PointSet {
        &self.source
    }

    /// Embed every source point; diagram i is the image of point i.
    pub fn embed(&self) -> Vec<PersistenceDiagram> {
        self.source
            .points()
            .iter()
            .map(|p| embed_point(p, self.c))
            .collect()
    }

    /// Check that the embedding is an exact isometry: for every pair the
    /// Wasserstein distance of the embedded diagrams must equal the l^p
    /// distance of the source points within `tol` relative, and the
    /// optimal matching must be the rail-by-rail identity whenever the
    /// source points differ.
    pub fn verify_isometry(&self, tol: f64) -> Result<IsometryReport> {
        let diagrams = self.embed();
        let n = self.source.len();
        let d = self.source.dim();
        let mut report = IsometryReport::default();
        let mut worst: Option<(usize, usize)> = None;

        for i in 0..n {
            for j in (i + 1)..n {
                let expected = lp_distance(self.source.point(i), self.source.point(j), self.order);
                let result = wasserstein(&diagrams[i], &diagrams[j], self.order);
                let residual = relative_error(result.distance, expected);
                if self.source.point(i) != self.source.point(j)
                    && !result.matching.is_identity(d)
                {
                    return Err(Error::IsometryViolation { i, j, residual });
                }
                if residual > report.max_residual {
                    report.max_residual = residual;
                    worst = Some((i, j));
                }
                report.residuals.push(PairResidual {
                    i,
                    j,
                    expected,
                    actual: result.distance,
                    residual,
                });
            }
        }
        if report.max_residual > tol {
            let (i, j) = worst.expect("worst pair recorded");
            return Err(Error::IsometryViolation {
                i,
                j,
                residual: report.max_residual,
            });
        }
        Ok(report)
    }

    /// Enumerate every partial matching between the embedded diagrams of
    /// points `i` and `j` other than the identity, and verify the cost
    /// bounds that make the identity optimal: every deviant matching costs
    /// more than `c`; leaving an index unmatched costs more than `3c/2`;
    /// pairing rail k with rail k' != k costs at least `2c`.
    pub fn deviant_matching_bounds(&self, i: usize, j: usize) -> Result<DeviantReport> {
        let d = self.source.dim();
        if d > DEVIANT_ENUM_LIMIT {
            return Err(Error::SizeLimitExceeded {
                size: d,
                limit: DEVIANT_ENUM_LIMIT,
            });
        }
        let di = embed_point(self.source.point(i), self.c);
        let dj = embed_point(self.source.point(j), self.c);
        let c = self.c;

        let mut checked = 0usize;
        let mut min_cost = f64::INFINITY;
        let mut min_unmatched: Option<f64> = None;
        let mut min_mismatched: Option<f64> = None;
        let mut violation: Option<String> = None;

        for_each_partial_matching(d, d, |m| {
            if violation.is_some() || m.is_identity(d) {
                return;
            }
            let cost = matching_cost(&di, &dj, m, self.order)
                .expect("enumerated matchings are valid");
            checked += 1;
            min_cost = min_cost.min(cost);
            if cost <= c {
                violation = Some(format!("cost {cost} <= c = {c} for {m:?}"));
                return;
            }
            let has_unmatched = !m.unmatched1.is_empty() || !m.unmatched2.is_empty();
            let has_mismatch = m.pairs.iter().any(|&(k, k2)| k != k2);
            if has_unmatched {
                min_unmatched = Some(min_unmatched.map_or(cost, |v: f64| v.min(cost)));
                if cost <= 1.5 * c {
                    violation = Some(format!(
                        "unmatched-index cost {cost} <= 3c/2 = {} for {m:?}",
                        1.5 * c
                    ));
                    return;
                }
            }
            if has_mismatch {
                min_mismatched = Some(min_mismatched.map_or(cost, |v: f64| v.min(cost)));
                if cost < 2.0 * c {
                    violation = Some(format!(
                        "mismatched-rail cost {cost} < 2c = {} for {m:?}",
                        2.0 * c
                    ));
                }
            }
        });

        if let Some(detail) = violation {
            return Err(Error::BoundViolation { i, j, detail });
        }
        Ok(DeviantReport {
            c,
            matchings_checked: checked,
            min_cost,
            min_unmatched_cost: min_unmatched,
            min_mismatched_cost: min_mismatched,
        })
    }
}

/// Keep the first `m` coordinates, zeroing the rest. `m` past the length
/// acts as the identity.
pub fn project_head(x: &[f64], m: usize) -> Vec<f64> {
    x.iter()
        .enumerate()
        .map(|(k, &v)| if k < m { v } else { 0.0 })
        .collect()
}

/// Zero the first `m` coordinates, keeping the tail. Complementary to
/// [`project_head`]: the two always sum back to the input exactly.
pub fn project_tail(x: &[f64], m: usize) -> Vec<f64> {
    x.iter()
        .enumerate()
        .map(|(k, &v)| if k < m { 0.0 } else { v })
        .collect()
}

fn tail_norm(x: &[f64], m: usize, order: Order) -> f64 {
    order.norm(&x[m.min(x.len())..])
}

/// Smallest cut `m` such that every vector's tail norm `|rho_m(a)|_p` is
/// at most `bound`. Always exists for finite vectors: cutting at the
/// maximum length zeroes every tail.
pub fn choose_truncation(vectors: &[Vec<f64>], order: Order, bound: f64) -> usize {
    assert!(bound > 0.0, "truncation bound must be positive");
    let max_len = vectors.iter().map(Vec::len).max().unwrap_or(0);
    (0..=max_len)
        .find(|&m| vectors.iter().all(|v| tail_norm(v, m, order) <= bound))
        .expect("the full-length cut zeroes every tail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wasserstein::brute_force_wasserstein;

    fn order(p: f64) -> Order {
        Order::new(p).unwrap()
    }

    fn point_set(rows: &[&[f64]]) -> PointSet {
        PointSet::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn constant_for_singleton_zero_is_one() {
        let a = point_set(&[&[0.0, 0.0]]);
        assert_eq!(embedding_constant(&a, order(3.0)), 1.0);
    }

    #[test]
    fn constant_dominated_by_pairwise_distance() {
        let a = point_set(&[&[0.0, 0.0], &[1.0, 1.0]]);
        let expected = 1.0 + 2.0f64.powf(1.0 / 3.0);
        assert!((embedding_constant(&a, order(3.0)) - expected).abs() < 1e-12);
    }

    #[test]
    fn constant_dominated_by_norm_or_distance() {
        let a = point_set(&[&[3.0, 0.0], &[0.0, 3.0]]);
        let expected = 1.0 + 162.0f64.powf(0.25);
        assert!((embedding_constant(&a, order(4.0)) - expected).abs() < 1e-12);
    }

    #[test]
    fn embed_zero_point_with_unit_constant() {
        let spec = EmbeddingSpec::new(point_set(&[&[0.0, 0.0]]), order(3.0));
        assert_eq!(spec.c(), 1.0);
        let d = &spec.embed()[0];
        assert_eq!(d.len(), 2);
        assert_eq!((d.point(0).birth(), d.point(0).death()), (0.0, 4.0));
        assert_eq!((d.point(1).birth(), d.point(1).death()), (2.0, 6.0));
    }

    #[test]
    fn embed_ones_point_with_constant_two() {
        // c for the singleton {(1,1)} is 1 + max(linf) = 2.
        let spec = EmbeddingSpec::new(point_set(&[&[1.0, 1.0]]), order(3.0));
        assert_eq!(spec.c(), 2.0);
        let d = &spec.embed()[0];
        assert_eq!((d.point(0).birth(), d.point(0).death()), (0.0, 9.0));
        assert_eq!((d.point(1).birth(), d.point(1).death()), (4.0, 13.0));
    }

    #[test]
    fn embedded_distance_equals_lp_distance() {
        let o = order(3.0);
        let spec = EmbeddingSpec::new(point_set(&[&[0.0, 0.0], &[1.0, 1.0]]), o);
        let diagrams = spec.embed();
        let expected = 2.0f64.powf(1.0 / 3.0);
        let fast = wasserstein(&diagrams[0], &diagrams[1], o).distance;
        let slow = brute_force_wasserstein(&diagrams[0], &diagrams[1], o)
            .unwrap()
            .distance;
        assert!((fast - expected).abs() < 1e-12);
        assert!((slow - expected).abs() < 1e-12);
    }

    #[test]
    fn diagram_points_keep_wide_gap() {
        let spec = EmbeddingSpec::new(point_set(&[&[-2.0, 3.0, 0.5], &[1.0, -1.0, 2.0]]), order(2.0));
        for d in spec.embed() {
            for pt in d.points() {
                assert!(pt.death() - pt.birth() > 3.0 * spec.c());
            }
        }
    }

    #[test]
    fn verify_isometry_singleton_passes() {
        let spec = EmbeddingSpec::new(point_set(&[&[4.0, -1.0]]), order(2.0));
        let report = spec.verify_isometry(DEFAULT_ISOMETRY_TOL).unwrap();
        assert_eq!(report.max_residual, 0.0);
        assert!(report.residuals.is_empty());
    }

    #[test]
    fn verify_isometry_unit_square_passes() {
        let a = point_set(&[&[0.0, 0.0], &[0.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]]);
        let spec = EmbeddingSpec::new(a, order(2.5));
        let report = spec.verify_isometry(DEFAULT_ISOMETRY_TOL).unwrap();
        assert_eq!(report.residuals.len(), 6);
        assert!(report.max_residual <= DEFAULT_ISOMETRY_TOL);
    }

    #[test]
    fn verify_isometry_handles_duplicate_points() {
        let a = point_set(&[&[1.0, 2.0], &[1.0, 2.0]]);
        let spec = EmbeddingSpec::new(a, order(2.0));
        let report = spec.verify_isometry(DEFAULT_ISOMETRY_TOL).unwrap();
        assert_eq!(report.residuals[0].actual, 0.0);
    }

    #[test]
    fn deviant_bounds_single_dimension() {
        // d = 1: the only deviants delete both points; cost exceeds 3c/2.
        let spec = EmbeddingSpec::new(point_set(&[&[0.5], &[-0.25]]), order(2.0));
        let report = spec.deviant_matching_bounds(0, 1).unwrap();
        assert_eq!(report.matchings_checked, 1);
        assert!(report.min_unmatched_cost.unwrap() > 1.5 * report.c);
        assert!(report.min_mismatched_cost.is_none());
    }

    #[test]
    fn deviant_bounds_two_dimensions() {
        let spec = EmbeddingSpec::new(point_set(&[&[0.0, 0.0], &[1.0, 1.0]]), order(3.0));
        let report = spec.deviant_matching_bounds(0, 1).unwrap();
        // partial matchings between two 2-point diagrams: 1 + 4 + 2 = 7,
        // minus the identity
        assert_eq!(report.matchings_checked, 6);
        assert!(report.min_cost > report.c);
        assert!(report.min_mismatched_cost.unwrap() >= 2.0 * report.c);
    }

    #[test]
    fn deviant_bounds_guards_dimension() {
        let spec = EmbeddingSpec::new(
            PointSet::new(vec![vec![0.0; 5], vec![1.0; 5]]).unwrap(),
            order(2.0),
        );
        assert!(matches!(
            spec.deviant_matching_bounds(0, 1),
            Err(Error::SizeLimitExceeded { size: 5, limit: 4 })
        ));
    }

    #[test]
    fn projections_split_and_recompose() {
        let x = [1.0, 2.0, 3.0];
        assert_eq!(project_head(&x, 2), vec![1.0, 2.0, 0.0]);
        assert_eq!(project_tail(&x, 2), vec![0.0, 0.0, 3.0]);
        assert_eq!(project_head(&x, 0), vec![0.0, 0.0, 0.0]);
        assert_eq!(project_head(&x, 9), x.to_vec());
        assert_eq!(project_tail(&x, 9), vec![0.0, 0.0, 0.0]);
        for m in 0..4 {
            let sum: Vec<f64> = project_head(&x, m)
                .iter()
                .zip(project_tail(&x, m))
                .map(|(h, t)| h + t)
                .collect();
            assert_eq!(sum, x.to_vec());
        }
    }

    #[test]
    fn truncation_of_zero_vectors_is_zero() {
        let vs = vec![vec![0.0; 8], vec![0.0; 3]];
        assert_eq!(choose_truncation(&vs, order(3.0), 0.5), 0);
    }

    #[test]
    fn truncation_of_geometric_vector() {
        // a_k = 2^-k for k = 1..20: the full tail norm is (1/7)^(1/3)
        // ~ 0.5228 > 1/2, and cutting one coordinate leaves ~ 0.2614.
        let v: Vec<f64> = (1..=20).map(|k| 0.5f64.powi(k)).collect();
        let o = order(3.0);
        assert!(o.norm(&v) > 0.5);
        assert!(o.norm(&v[1..]) < 0.5);
        assert_eq!(choose_truncation(&[v], o, 0.5), 1);
    }

    #[test]
    fn truncation_covers_every_unit_coordinate() {
        // Both unit coordinates sit within the first two slots, so m = 2 is
        // the first cut with every tail norm at or below 1/2 (m = 1 leaves
        // the second vector's unit coordinate in its tail).
        let vs = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        assert_eq!(choose_truncation(&vs, order(3.0), 0.5), 2);
    }

    #[test]
    fn point_set_rejects_ragged_and_empty() {
        assert!(matches!(
            PointSet::new(vec![]),
            Err(Error::EmptyInput(_))
        ));
        assert!(matches!(
            PointSet::new(vec![vec![1.0], vec![1.0, 2.0]]),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn point_set_csv_round_trip() {
        let a = PointSet::from_csv_str("# square\n0,0\n0,1\n1,0\n1,1\n").unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(a.dim(), 2);
        assert!(matches!(
            PointSet::from_csv_str("1,2\n3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            PointSet::from_csv_str("# only comments\n"),
            Err(Error::EmptyInput(_))
        ));
    }
}
