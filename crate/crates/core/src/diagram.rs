//! Persistence diagrams, partial matchings, and the p-cost of a matching.
//!
//! A diagram is a finite multiset of points `(birth, death)` with
//! `birth < death`. A partial matching pairs up subsets of two diagrams;
//! every unpaired point pays its distance to the diagonal `{x = y}`.
//! The p-cost of a matching is the l^p norm of the sequence of matched-pair
//! l^inf distances together with all deletion costs.

use crate::error::{Error, Result};
use std::cmp::Ordering;

/// A birth-death pair with `birth < death`, both coordinates finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagramPoint {
    birth: f64,
    death: f64,
}

impl DiagramPoint {
    pub fn new(birth: f64, death: f64) -> Result<Self> {
        if !birth.is_finite() || !death.is_finite() {
            return Err(Error::NonFinite);
        }
        if birth >= death {
            return Err(Error::InvalidPoint { birth, death });
        }
        Ok(Self { birth, death })
    }

    pub fn birth(&self) -> f64 {
        self.birth
    }

    pub fn death(&self) -> f64 {
        self.death
    }

    /// Cost of deleting this point: `(death - birth) / 2`, its l^inf
    /// distance to the diagonal. Strictly positive.
    pub fn persistence_cost(&self) -> f64 {
        (self.death - self.birth) / 2.0
    }

    /// l^inf distance between two points of the plane.
    pub fn linf_distance(&self, other: &DiagramPoint) -> f64 {
        let db = (self.birth - other.birth).abs();
        let dd = (self.death - other.death).abs();
        db.max(dd)
    }

    fn cmp_lex(&self, other: &DiagramPoint) -> Ordering {
        self.birth
            .total_cmp(&other.birth)
            .then(self.death.total_cmp(&other.death))
    }
}

/// The exponent of the matching cost, `1 <= p < infinity`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Order {
    p: f64,
}

impl Order {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p < 1.0 {
            return Err(Error::InvalidOrder(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `x^p` for nonnegative `x`. The p = 1 and p = 2 cases go through
    /// exact float operations instead of `powf`.
    pub fn pow(&self, x: f64) -> f64 {
        if self.p == 1.0 {
            x
        } else if self.p == 2.0 {
            x * x
        } else {
            x.powf(self.p)
        }
    }

    /// `s^(1/p)` for nonnegative `s`; inverse of [`Order::pow`].
    pub fn root(&self, s: f64) -> f64 {
        if self.p == 1.0 {
            s
        } else if self.p == 2.0 {
            s.sqrt()
        } else {
            s.powf(1.0 / self.p)
        }
    }

    /// l^p norm of a coordinate slice.
    pub fn norm(&self, v: &[f64]) -> f64 {
        self.root(v.iter().map(|x| self.pow(x.abs())).sum())
    }
}

/// A finite multiset of diagram points. Storage order fixes the indices
/// `0..n` used by matchings; duplicates are allowed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PersistenceDiagram {
    points: Vec<DiagramPoint>,
}

impl PersistenceDiagram {
    pub fn new(points: Vec<DiagramPoint>) -> Self {
        Self { points }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Build a diagram from raw `(birth, death)` pairs.
    pub fn from_pairs<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> Result<Self> {
        let points = pairs
            .into_iter()
            .map(|(b, d)| DiagramPoint::new(b, d))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[DiagramPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &DiagramPoint {
        &self.points[i]
    }

    /// Distance to the empty diagram: the unique matching deletes every
    /// point, so this is the l^p norm of all deletion costs.
    pub fn empty_distance(&self, order: Order) -> f64 {
        order.root(
            self.points
                .iter()
                .map(|pt| order.pow(pt.persistence_cost()))
                .sum(),
        )
    }

    /// Lexicographic comparison of the stored point lists. Used to pick a
    /// canonical argument order so that distance computations are exactly
    /// symmetric.
    pub(crate) fn cmp_lex(&self, other: &PersistenceDiagram) -> Ordering {
        for (a, b) in self.points.iter().zip(other.points.iter()) {
            match a.cmp_lex(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.points.len().cmp(&other.points.len())
    }

    /// Parse the diagram CSV format: one `birth,death` point per line,
    /// `#`-prefixed comments and blank lines ignored. An empty file is the
    /// empty diagram. Line numbers in errors are 1-based over the raw file.
    pub fn from_csv_str(s: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split(',').collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected 2 fields `birth,death`, got {}", fields.len()),
                });
            }
            let birth: f64 = fields[0].trim().parse().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid number `{}`", fields[0].trim()),
            })?;
            let death: f64 = fields[1].trim().parse().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid number `{}`", fields[1].trim()),
            })?;
            if !birth.is_finite() || !death.is_finite() {
                return Err(Error::Parse {
                    line,
                    msg: "coordinates must be finite".to_string(),
                });
            }
            if birth >= death {
                return Err(Error::InvariantAtLine { line, birth, death });
            }
            points.push(DiagramPoint { birth, death });
        }
        Ok(Self { points })
    }

    /// Render the diagram CSV format. Floats use the shortest
    /// round-tripping representation, so parsing the output recovers the
    /// diagram bit-exactly.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for pt in &self.points {
            out.push_str(&format!("{},{}\n", pt.birth, pt.death));
        }
        out
    }
}

/// A bijection between subsets of two diagrams' index sets, plus the
/// leftover indices on each side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMatching {
    pub pairs: Vec<(usize, usize)>,
    pub unmatched1: Vec<usize>,
    pub unmatched2: Vec<usize>,
}

impl PartialMatching {
    /// The identity matching between two diagrams of equal size `n`.
    pub fn identity(n: usize) -> Self {
        Self {
            pairs: (0..n).map(|i| (i, i)).collect(),
            unmatched1: Vec::new(),
            unmatched2: Vec::new(),
        }
    }

    /// The matching that deletes every point of both diagrams.
    pub fn all_unmatched(n: usize, m: usize) -> Self {
        Self {
            pairs: Vec::new(),
            unmatched1: (0..n).collect(),
            unmatched2: (0..m).collect(),
        }
    }

    pub fn is_identity(&self, n: usize) -> bool {
        self.unmatched1.is_empty()
            && self.unmatched2.is_empty()
            && self.pairs.len() == n
            && self.pairs.iter().enumerate().all(|(k, &(i, j))| i == k && j == k)
    }

    /// Swap the roles of the two diagrams.
    pub fn mirrored(&self) -> Self {
        let mut pairs: Vec<(usize, usize)> = self.pairs.iter().map(|&(i, j)| (j, i)).collect();
        pairs.sort_unstable();
        Self {
            pairs,
            unmatched1: self.unmatched2.clone(),
            unmatched2: self.unmatched1.clone(),
        }
    }

    /// Check the bijection invariants against diagram sizes `n1`, `n2`:
    /// first components plus `unmatched1` partition `0..n1`, and likewise
    /// on the second side.
    pub fn validate(&self, n1: usize, n2: usize) -> Result<()> {
        let check_side = |matched: Vec<usize>, unmatched: &[usize], n: usize, side: &str| {
            let mut seen = vec![false; n];
            for &i in matched.iter().chain(unmatched.iter()) {
                if i >= n {
                    return Err(Error::InvalidMatching(format!(
                        "index {i} out of range for diagram {side} of size {n}"
                    )));
                }
                if seen[i] {
                    return Err(Error::InvalidMatching(format!(
                        "index {i} of diagram {side} appears twice"
                    )));
                }
                seen[i] = true;
            }
            if seen.iter().any(|&s| !s) {
                return Err(Error::InvalidMatching(format!(
                    "diagram {side} indices are not all covered"
                )));
            }
            Ok(())
        };
        check_side(
            self.pairs.iter().map(|&(i, _)| i).collect(),
            &self.unmatched1,
            n1,
            "1",
        )?;
        check_side(
            self.pairs.iter().map(|&(_, j)| j).collect(),
            &self.unmatched2,
            n2,
            "2",
        )
    }
}

/// The p-cost of a partial matching between `d1` and `d2`: matched pairs
/// pay their l^inf distance, unmatched points pay their deletion cost, and
/// the whole sequence is collapsed by the l^p norm.
///
/// Summands are accumulated in a fixed order (pairs, unmatched1,
/// unmatched2) so repeated evaluation is bit-reproducible.
pub fn matching_cost(
    d1: &PersistenceDiagram,
    d2: &PersistenceDiagram,
    m: &PartialMatching,
    order: Order,
) -> Result<f64> {
    m.validate(d1.len(), d2.len())?;
    let mut total = 0.0;
    for &(i, j) in &m.pairs {
        total += order.pow(d1.point(i).linf_distance(d2.point(j)));
    }
    for &i in &m.unmatched1 {
        total += order.pow(d1.point(i).persistence_cost());
    }
    for &j in &m.unmatched2 {
        total += order.pow(d2.point(j).persistence_cost());
    }
    Ok(order.root(total))
}
