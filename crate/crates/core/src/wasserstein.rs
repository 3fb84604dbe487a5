//! Exact p-Wasserstein distance between finite persistence diagrams.
//!
//! Optimal partial matching reduces to a balanced assignment problem by
//! diagonal augmentation: an (n+m) x (n+m) matrix where each point may be
//! matched across diagrams or to its own ghost diagonal copy, and ghosts
//! pair with ghosts for free. Every partial matching then corresponds to a
//! perfect assignment whose total is the p-th power of the matching cost,
//! so one exact Hungarian solve realizes the infimum over all partial
//! matchings.
//!
//! [`brute_force_wasserstein`] enumerates every partial matching literally
//! and exists to validate the reduction; the two must agree exactly.

use crate::assignment::{solve_assignment, Assignment, AssignmentProblem};
use crate::diagram::{matching_cost, Order, PartialMatching, PersistenceDiagram};
use crate::error::{Error, Result};
use crate::hilbert::FiniteMetricSpace;
use itertools::Itertools;
use std::cmp::Ordering;

/// Enumeration guard for the brute-force oracle: the number of partial
/// matchings grows super-exponentially past this.
pub const BRUTE_FORCE_LIMIT: usize = 6;

/// A distance together with a matching that realizes it.
#[derive(Debug, Clone)]
pub struct WassersteinResult {
    pub distance: f64,
    pub matching: PartialMatching,
}

/// Build the diagonal-augmented assignment matrix for `d1` vs `d2`.
///
/// Layout with n = |d1|, m = |d2|:
/// rows `0..n` are points of `d1`, rows `n..n+m` are ghosts for `d2`;
/// columns `0..m` are points of `d2`, columns `m..m+n` are ghosts for `d1`.
/// Costs are stored raised to the p-th power, so an assignment total is
/// the p-th power of the matching cost. Forbidden cells carry the sentinel
/// `1 + (n+m) * max(real entries)`, strictly larger than any sentinel-free
/// assignment total.
pub fn build_assignment(
    d1: &PersistenceDiagram,
    d2: &PersistenceDiagram,
    order: Order,
) -> AssignmentProblem {
    let n = d1.len();
    let m = d2.len();
    let k = n + m;
    let mut cost = vec![0.0; k * k];
    let mut max_entry: f64 = 0.0;

    for i in 0..n {
        for j in 0..m {
            let e = order.pow(d1.point(i).linf_distance(d2.point(j)));
            cost[i * k + j] = e;
            max_entry = max_entry.max(e);
        }
    }
    for i in 0..n {
        let e = order.pow(d1.point(i).persistence_cost());
        cost[i * k + (m + i)] = e;
        max_entry = max_entry.max(e);
    }
    for j in 0..m {
        let e = order.pow(d2.point(j).persistence_cost());
        cost[(n + j) * k + j] = e;
        max_entry = max_entry.max(e);
    }

    let sentinel = 1.0 + (k as f64) * max_entry;
    for i in 0..n {
        for g in 0..n {
            if g != i {
                cost[i * k + (m + g)] = sentinel;
            }
        }
    }
    for j in 0..m {
        for g in 0..m {
            if g != j {
                cost[(n + j) * k + g] = sentinel;
            }
        }
    }
    // bottom-right ghost-to-ghost block stays zero

    AssignmentProblem::new(k, cost, Some(sentinel)).expect("entries finite by construction")
}

fn recover_matching(n: usize, m: usize, assignment: &Assignment) -> PartialMatching {
    let mut pairs = Vec::new();
    let mut unmatched1 = Vec::new();
    let mut matched2 = vec![false; m];
    for i in 0..n {
        let col = assignment.row_to_col[i];
        if col < m {
            pairs.push((i, col));
            matched2[col] = true;
        } else {
            unmatched1.push(i);
        }
    }
    let unmatched2 = (0..m).filter(|&j| !matched2[j]).collect();
    PartialMatching {
        pairs,
        unmatched1,
        unmatched2,
    }
}

/// Exact p-Wasserstein distance with an optimal matching.
///
/// Arguments are put in a canonical lexicographic order before solving,
/// which makes the function exactly symmetric: `wasserstein(a, b, p)` and
/// `wasserstein(b, a, p)` run the identical computation and return
/// bit-identical distances (with mirrored matchings).
pub fn wasserstein(
    d1: &PersistenceDiagram,
    d2: &PersistenceDiagram,
    order: Order,
) -> WassersteinResult {
    if d1.cmp_lex(d2) == Ordering::Greater {
        let swapped = wasserstein(d2, d1, order);
        return WassersteinResult {
            distance: swapped.distance,
            matching: swapped.matching.mirrored(),
        };
    }

    let prob = build_assignment(d1, d2, order);
    let assignment = solve_assignment(&prob);
    for (row, &col) in assignment.row_to_col.iter().enumerate() {
        assert!(
            !prob.is_forbidden(row, col),
            "optimal assignment selected a sentinel entry at ({row}, {col})"
        );
    }

    let matching = recover_matching(d1.len(), d2.len(), &assignment);
    debug_assert!(matching.validate(d1.len(), d2.len()).is_ok());
    WassersteinResult {
        distance: order.root(assignment.total),
        matching,
    }
}

/// Visit every partial matching between index sets `0..n` and `0..m`,
/// including the all-unmatched one, in a fixed deterministic order.
pub(crate) fn for_each_partial_matching<F: FnMut(&PartialMatching)>(
    n: usize,
    m: usize,
    mut visit: F,
) {
    for k in 0..=n.min(m) {
        for side1 in (0..n).combinations(k) {
            for side2 in (0..m).combinations(k) {
                for image in side2.iter().copied().permutations(k) {
                    let pairs: Vec<(usize, usize)> =
                        side1.iter().copied().zip(image).collect();
                    let unmatched1 = (0..n).filter(|i| !side1.contains(i)).collect();
                    let unmatched2 = (0..m).filter(|j| !side2.contains(j)).collect();
                    visit(&PartialMatching {
                        pairs,
                        unmatched1,
                        unmatched2,
                    });
                }
            }
        }
    }
}

/// Literal enumeration of the distance definition: the minimum p-cost over
/// every partial matching. Guarded to diagrams of at most
/// [`BRUTE_FORCE_LIMIT`] points per side.
pub fn brute_force_wasserstein(
    d1: &PersistenceDiagram,
    d2: &PersistenceDiagram,
    order: Order,
) -> Result<WassersteinResult> {
    for size in [d1.len(), d2.len()] {
        if size > BRUTE_FORCE_LIMIT {
            return Err(Error::SizeLimitExceeded {
                size,
                limit: BRUTE_FORCE_LIMIT,
            });
        }
    }
    let mut best: Option<WassersteinResult> = None;
    for_each_partial_matching(d1.len(), d2.len(), |m| {
        let cost = matching_cost(d1, d2, m, order).expect("enumerated matchings are valid");
        if best.as_ref().is_none_or(|b| cost < b.distance) {
            best = Some(WassersteinResult {
                distance: cost,
                matching: m.clone(),
            });
        }
    });
    Ok(best.expect("enumeration always visits the all-unmatched matching"))
}

/// Pairwise distance matrix of a family of diagrams. Only the upper
/// triangle is solved; the result is exactly symmetric with a zero
/// diagonal.
pub fn distance_matrix(
    diagrams: &[PersistenceDiagram],
    order: Order,
) -> Result<FiniteMetricSpace> {
    if diagrams.is_empty() {
        return Err(Error::EmptyInput("diagram list"));
    }
    let n = diagrams.len();
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = wasserstein(&diagrams[i], &diagrams[j], order).distance;
            rows[i][j] = d;
            rows[j][i] = d;
        }
    }
    FiniteMetricSpace::new(rows)
}
