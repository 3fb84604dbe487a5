//! Hilbert-embeddability certificates for finite metric spaces.
//!
//! A finite metric space embeds isometrically into a Hilbert space exactly
//! when the doubly centered matrix `G = -1/2 J D^2 J` is positive
//! semidefinite (`D^2` entrywise squared distances, `J = I - ones/n`).
//! [`certify`] eigendecomposes `G` and reports the most negative
//! eigenvalue as the obstruction; [`mds_embed`] builds the best-effort
//! Euclidean configuration from the nonnegative part of the spectrum and
//! measures how much the dropped mass distorts the metric.

use crate::diagram::Order;
use crate::embedding::{lp_distance, PointSet};
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use serde::Serialize;

/// Default relative eigenvalue tolerance, measured against the spectral
/// radius. Absolute thresholds misclassify large-scale metric spaces.
pub const DEFAULT_SPECTRAL_TOL: f64 = 1e-9;

/// Relative slack for the triangle-inequality check on construction;
/// absorbs solver float error in Wasserstein distance matrices.
pub const TRIANGLE_SLACK: f64 = 1e-9;

/// A symmetric nonnegative distance matrix with zero diagonal satisfying
/// the triangle inequality (within [`TRIANGLE_SLACK`] relative).
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    n: usize,
    dist: Vec<f64>,
}

impl FiniteMetricSpace {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyInput("distance matrix"));
        }
        let mut dist = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::InvalidMetric(format!(
                    "matrix must be square: row has {} entries, expected {}",
                    row.len(),
                    n
                )));
            }
            dist.extend_from_slice(row);
        }
        let ms = Self { n, dist };
        ms.validate()?;
        Ok(ms)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            if self.get(i, i) != 0.0 {
                return Err(Error::InvalidMetric(format!(
                    "diagonal entry ({i}, {i}) is {}, expected 0",
                    self.get(i, i)
                )));
            }
            for j in 0..n {
                let d = self.get(i, j);
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidMetric(format!(
                        "entry ({i}, {j}) = {d} is not a finite nonnegative real"
                    )));
                }
                if d != self.get(j, i) {
                    return Err(Error::InvalidMetric(format!(
                        "asymmetric entries at ({i}, {j}): {d} vs {}",
                        self.get(j, i)
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let dij = self.get(i, j);
                for k in 0..n {
                    let detour = self.get(i, k) + self.get(k, j);
                    if dij - detour > TRIANGLE_SLACK * dij.max(detour) {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality fails: d({i},{j}) = {dij} > d({i},{k}) + d({k},{j}) = {detour}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The l^p distance matrix of a point set.
    pub fn from_lp_points(points: &PointSet, order: Order) -> Result<Self> {
        let n = points.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            0.0
                        } else {
                            lp_distance(points.point(i), points.point(j), order)
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(rows)
    }

    /// Parse the distance-matrix CSV format: n lines of n comma-separated
    /// reals. Malformed numbers or a non-square shape are parse errors;
    /// metric-axiom failures surface as [`Error::InvalidMetric`].
    pub fn from_csv_str(s: &str) -> Result<Self> {
        let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let row = trimmed
                .split(',')
                .map(|f| {
                    f.trim().parse::<f64>().map_err(|_| Error::Parse {
                        line,
                        msg: format!("invalid number `{}`", f.trim()),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push((line, row));
        }
        if rows.is_empty() {
            return Err(Error::EmptyInput("distance matrix"));
        }
        let n = rows.len();
        for (line, row) in &rows {
            if row.len() != n {
                return Err(Error::Parse {
                    line: *line,
                    msg: format!("expected {n} entries per row, got {}", row.len()),
                });
            }
        }
        Self::new(rows.into_iter().map(|(_, row)| row).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// Uniformly rescale all distances by `s > 0`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            n: self.n,
            dist: self.dist.iter().map(|d| d * s).collect(),
        }
    }
}

/// The doubly centered Gram matrix `-1/2 J D^2 J`. Symmetric with zero row
/// sums; positive semidefinite exactly when the metric is Euclidean.
pub fn gram_from_distances(ms: &FiniteMetricSpace) -> DMatrix<f64> {
    let n = ms.n();
    let mut g = DMatrix::from_fn(n, n, |i, j| {
        let d = ms.get(i, j);
        -0.5 * d * d
    });
    let row_means: Vec<f64> = (0..n).map(|i| g.row(i).sum() / n as f64).collect();
    let grand_mean: f64 = row_means.iter().sum::<f64>() / n as f64;
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = g[(i, j)] - row_means[i] - row_means[j] + grand_mean;
        }
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "EMBEDDABLE")]
    Embeddable,
    #[serde(rename = "NOT_EMBEDDABLE")]
    NotEmbeddable,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Embeddable => write!(f, "EMBEDDABLE"),
            Verdict::NotEmbeddable => write!(f, "NOT_EMBEDDABLE"),
        }
    }
}

/// Eigenvalue evidence for or against isometric Hilbert embeddability.
#[derive(Debug, Clone)]
pub struct EmbeddingCertificate {
    /// Spectrum of the centered matrix, descending.
    pub eigenvalues: Vec<f64>,
    pub verdict: Verdict,
    /// Most negative eigenvalue, 0 if the spectrum is nonnegative.
    pub worst_negative: f64,
}

impl EmbeddingCertificate {
    /// Spectral radius of the centered matrix.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// `|worst_negative|` normalized by the spectral radius; 0 for the
    /// all-zero spectrum.
    pub fn normalized_obstruction(&self) -> f64 {
        let radius = self.spectral_radius();
        if radius == 0.0 {
            0.0
        } else {
            self.worst_negative.abs() / radius
        }
    }
}

fn sorted_eigen(g: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = g.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in idx.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Schoenberg certificate: eigendecompose the centered matrix and compare
/// the most negative eigenvalue against `tol` times the spectral radius.
pub fn certify(ms: &FiniteMetricSpace, tol: f64) -> EmbeddingCertificate {
    let (eigenvalues, _) = sorted_eigen(gram_from_distances(ms));
    let worst = eigenvalues.last().copied().unwrap_or(0.0);
    let worst_negative = if worst < 0.0 { worst } else { 0.0 };
    let radius = eigenvalues.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let verdict = if worst_negative >= -tol * radius {
        Verdict::Embeddable
    } else {
        Verdict::NotEmbeddable
    };
    EmbeddingCertificate {
        eigenvalues,
        verdict,
        worst_negative,
    }
}

/// How far an embedding deviates from a scaled isometry. The gaps are the
/// worst multiplicative expansion and shrinkage over all pairs at positive
/// distance; their product is scale-invariant, at least 1, and equal to 1
/// exactly for scaled isometries.
#[derive(Debug, Clone, Copy)]
pub struct DistortionReport {
    /// Worst shrinkage: max over pairs of `d(x,y) / |f(x)-f(y)|`.
    pub rho_minus_gap: f64,
    /// Worst expansion: max over pairs of `|f(x)-f(y)| / d(x,y)`.
    pub rho_plus_gap: f64,
    /// `rho_plus_gap * rho_minus_gap`.
    pub multiplicative_distortion: f64,
}

impl DistortionReport {
    fn isometric() -> Self {
        Self {
            rho_minus_gap: 1.0,
            rho_plus_gap: 1.0,
            multiplicative_distortion: 1.0,
        }
    }
}

/// Classical-scaling embedding from the nonnegative spectrum: dimensions
/// are the eigenvalues above `DEFAULT_SPECTRAL_TOL` relative, coordinates
/// are eigenvectors scaled by the eigenvalue square roots. The report
/// measures the worst pairwise shrinkage and expansion against `ms`.
pub fn mds_embed(ms: &FiniteMetricSpace) -> (Vec<Vec<f64>>, DistortionReport) {
    let n = ms.n();
    let (values, vectors) = sorted_eigen(gram_from_distances(ms));
    let radius = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let threshold = DEFAULT_SPECTRAL_TOL * radius;
    let keep: Vec<usize> = (0..n).filter(|&t| values[t] > threshold).collect();

    let points: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            keep.iter()
                .map(|&t| vectors[(i, t)] * values[t].sqrt())
                .collect()
        })
        .collect();

    let mut expansion: f64 = 0.0;
    let mut shrinkage: f64 = 0.0;
    let mut informative = false;
    for i in 0..n {
        for j in (i + 1)..n {
            let original = ms.get(i, j);
            if original == 0.0 {
                // zero-distance pairs carry no multiplicative information
                continue;
            }
            informative = true;
            let embedded = euclidean(&points[i], &points[j]);
            expansion = expansion.max(embedded / original);
            shrinkage = shrinkage.max(if embedded == 0.0 {
                f64::INFINITY
            } else {
                original / embedded
            });
        }
    }
    let report = if informative {
        DistortionReport {
            rho_minus_gap: shrinkage,
            rho_plus_gap: expansion,
            // the product is >= 1 in exact arithmetic; the clamp absorbs
            // the rounding of the two ratio maxima
            multiplicative_distortion: (expansion * shrinkage).max(1.0),
        }
    } else {
        DistortionReport::isometric()
    };
    (points, report)
}

fn euclidean(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// The JSON-facing certificate: spectrum, obstruction, verdict, and the
/// embedding distortion in one record.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateRecord {
    pub n: usize,
    pub p: Option<f64>,
    pub eigenvalues: Vec<f64>,
    pub worst_negative: f64,
    pub ratio: f64,
    pub verdict: Verdict,
    pub distortion: f64,
}

impl CertificateRecord {
    pub fn build(ms: &FiniteMetricSpace, p: Option<f64>, tol: f64) -> Self {
        let cert = certify(ms, tol);
        let (_, report) = mds_embed(ms);
        Self {
            n: ms.n(),
            p,
            eigenvalues: cert.eigenvalues.clone(),
            worst_negative: cert.worst_negative,
            ratio: cert.normalized_obstruction(),
            verdict: cert.verdict,
            distortion: report.multiplicative_distortion,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

/// The star metric K_{1,3}: a center at distance 1 from three leaves that
/// sit pairwise at distance 2. Not Euclidean: three points pairwise 2
/// apart have circumradius 2/sqrt(3) > 1, so no center can exist.
pub fn star_metric() -> FiniteMetricSpace {
    FiniteMetricSpace::new(vec![
        vec![0.0, 1.0, 1.0, 1.0],
        vec![1.0, 0.0, 2.0, 2.0],
        vec![1.0, 2.0, 0.0, 2.0],
        vec![1.0, 2.0, 2.0, 0.0],
    ])
    .expect("star metric satisfies the triangle inequality")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn metric(rows: &[&[f64]]) -> FiniteMetricSpace {
        FiniteMetricSpace::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn construction_validates_axioms() {
        assert!(matches!(
            FiniteMetricSpace::new(vec![]),
            Err(Error::EmptyInput(_))
        ));
        assert!(FiniteMetricSpace::new(vec![vec![0.0, 1.0]]).is_err());
        assert!(FiniteMetricSpace::new(vec![vec![1.0]]).is_err());
        assert!(FiniteMetricSpace::new(vec![
            vec![0.0, 1.0],
            vec![2.0, 0.0],
        ])
        .is_err());
        assert!(FiniteMetricSpace::new(vec![
            vec![0.0, -1.0],
            vec![-1.0, 0.0],
        ])
        .is_err());
        // triangle violation: d(0,2) = 5 > 1 + 1
        let err = FiniteMetricSpace::new(vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ])
        .unwrap_err();
        assert!(matches!(err, Error::InvalidMetric(_)));
    }

    #[test]
    fn gram_of_single_point_is_zero() {
        let g = gram_from_distances(&metric(&[&[0.0]]));
        assert_eq!(g[(0, 0)], 0.0);
    }

    #[test]
    fn gram_of_two_points_at_distance_two() {
        let g = gram_from_distances(&metric(&[&[0.0, 2.0], &[2.0, 0.0]]));
        let cert = certify(&metric(&[&[0.0, 2.0], &[2.0, 0.0]]), DEFAULT_SPECTRAL_TOL);
        assert!((g[(0, 0)] - 1.0).abs() < 1e-12);
        assert!((g[(0, 1)] + 1.0).abs() < 1e-12);
        assert!((cert.eigenvalues[0] - 2.0).abs() < 1e-12);
        assert!(cert.eigenvalues[1].abs() < 1e-12);
    }

    #[test]
    fn gram_rows_sum_to_zero() {
        let g = gram_from_distances(&star_metric());
        for i in 0..4 {
            assert!(g.row(i).sum().abs() < 1e-12);
        }
    }

    #[test]
    fn unit_triangle_spectrum_and_embedding() {
        let ms = metric(&[
            &[0.0, 1.0, 1.0],
            &[1.0, 0.0, 1.0],
            &[1.0, 1.0, 0.0],
        ]);
        let cert = certify(&ms, DEFAULT_SPECTRAL_TOL);
        assert_eq!(cert.verdict, Verdict::Embeddable);
        assert!((cert.eigenvalues[0] - 0.5).abs() < 1e-12);
        assert!((cert.eigenvalues[1] - 0.5).abs() < 1e-12);
        assert!(cert.eigenvalues[2].abs() < 1e-12);

        let (points, report) = mds_embed(&ms);
        assert_eq!(points[0].len(), 2);
        assert!((report.multiplicative_distortion - 1.0).abs() < 1e-9);
    }

    #[test]
    fn star_metric_is_not_embeddable() {
        let cert = certify(&star_metric(), DEFAULT_SPECTRAL_TOL);
        assert_eq!(cert.verdict, Verdict::NotEmbeddable);
        assert!(cert.worst_negative < 0.0);
        let (_, report) = mds_embed(&star_metric());
        assert!(report.multiplicative_distortion > 1.0);
    }

    #[test]
    fn single_point_embeds_trivially() {
        let ms = metric(&[&[0.0]]);
        let cert = certify(&ms, DEFAULT_SPECTRAL_TOL);
        assert_eq!(cert.verdict, Verdict::Embeddable);
        assert_eq!(cert.worst_negative, 0.0);
        let (points, report) = mds_embed(&ms);
        assert!(points[0].is_empty());
        assert_eq!(report.multiplicative_distortion, 1.0);
    }

    #[test]
    fn scaling_distances_scales_eigenvalues_quadratically() {
        let ms = star_metric();
        let cert = certify(&ms, DEFAULT_SPECTRAL_TOL);
        let scaled = certify(&ms.scaled(3.0), DEFAULT_SPECTRAL_TOL);
        assert_eq!(scaled.verdict, cert.verdict);
        for (a, b) in cert.eigenvalues.iter().zip(&scaled.eigenvalues) {
            assert!((9.0 * a - b).abs() < 1e-9 * b.abs().max(1.0));
        }
    }

    #[test]
    fn certificate_record_serializes_schema() {
        let record = CertificateRecord::build(&star_metric(), Some(4.0), DEFAULT_SPECTRAL_TOL);
        let json = record.to_json();
        assert!(json.contains("\"verdict\":\"NOT_EMBEDDABLE\""));
        assert!(json.contains("\"n\":4"));
        assert!(json.contains("\"p\":4.0"));
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        for field in [
            "n",
            "p",
            "eigenvalues",
            "worst_negative",
            "ratio",
            "verdict",
            "distortion",
        ] {
            assert!(value.get(field).is_some(), "missing field {field}");
        }
    }

    #[test]
    fn matrix_csv_parses_and_validates() {
        let ms = FiniteMetricSpace::from_csv_str("0,1\n1,0\n").unwrap();
        assert_eq!(ms.n(), 2);
        assert!(matches!(
            FiniteMetricSpace::from_csv_str("0,1\n1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            FiniteMetricSpace::from_csv_str("0,x\n1,0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            FiniteMetricSpace::from_csv_str("0,1\n2,0\n"),
            Err(Error::InvalidMetric(_))
        ));
    }
}
