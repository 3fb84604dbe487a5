//! Exact minimum-cost perfect assignment on square cost matrices.
//!
//! The solver is the O(k^3) shortest-augmenting-path form of the Hungarian
//! algorithm with row/column potentials. It is deterministic: columns are
//! scanned in increasing index and candidates replaced only on strict
//! improvement, so identical inputs always produce the identical
//! assignment, including among cost ties.

use crate::error::{Error, Result};

/// A square nonnegative cost matrix, row-major. Entries at or above
/// `forbidden` (when set) mark pairings the reduction rules out; the
/// optimum provably never selects one, and [`crate::wasserstein::wasserstein`]
/// asserts that on every solve.
#[derive(Debug, Clone)]
pub struct AssignmentProblem {
    size: usize,
    cost: Vec<f64>,
    forbidden: Option<f64>,
}

impl AssignmentProblem {
    pub fn new(size: usize, cost: Vec<f64>, forbidden: Option<f64>) -> Result<Self> {
        if cost.len() != size * size {
            return Err(Error::InvalidMatching(format!(
                "cost matrix has {} entries, expected {}x{}",
                cost.len(),
                size,
                size
            )));
        }
        if cost.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            size,
            cost,
            forbidden,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let size = rows.len();
        let mut cost = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(Error::InvalidMatching(
                    "cost matrix must be square".to_string(),
                ));
            }
            cost.extend_from_slice(row);
        }
        Self::new(size, cost, None)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.cost[row * self.size + col]
    }

    /// The sentinel threshold, if the matrix carries forbidden entries.
    pub fn forbidden(&self) -> Option<f64> {
        self.forbidden
    }

    /// True when the entry at `(row, col)` is a forbidden marker.
    pub fn is_forbidden(&self, row: usize, col: usize) -> bool {
        match self.forbidden {
            Some(s) => self.get(row, col) >= s,
            None => false,
        }
    }
}

/// A minimum-cost perfect assignment: `row_to_col[i]` is the column
/// assigned to row `i`, and `total` is the sum of the selected entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub total: f64,
    pub row_to_col: Vec<usize>,
}

const NONE: usize = usize::MAX;

/// Solve the assignment problem exactly.
pub fn solve_assignment(prob: &AssignmentProblem) -> Assignment {
    let n = prob.size;
    // Column n is a virtual staging column for the row being inserted.
    let mut potential_row = vec![0.0; n];
    let mut potential_col = vec![0.0; n + 1];
    let mut row_of_col = vec![NONE; n + 1];

    for row in 0..n {
        row_of_col[n] = row;
        let mut col_cur = n;
        let mut min_reduced = vec![f64::INFINITY; n + 1];
        let mut prev_col = vec![NONE; n + 1];
        let mut in_tree = vec![false; n + 1];

        // Grow the alternating tree until an unassigned column is reached.
        while row_of_col[col_cur] != NONE {
            in_tree[col_cur] = true;
            let row_cur = row_of_col[col_cur];
            let mut delta = f64::INFINITY;
            let mut col_next = n;

            for col in 0..n {
                if in_tree[col] {
                    continue;
                }
                let reduced =
                    prob.get(row_cur, col) - potential_row[row_cur] - potential_col[col];
                if reduced < min_reduced[col] {
                    min_reduced[col] = reduced;
                    prev_col[col] = col_cur;
                }
                if min_reduced[col] < delta {
                    delta = min_reduced[col];
                    col_next = col;
                }
            }

            for col in 0..=n {
                if in_tree[col] {
                    potential_row[row_of_col[col]] += delta;
                    potential_col[col] -= delta;
                } else {
                    min_reduced[col] -= delta;
                }
            }
            col_cur = col_next;
        }

        // Augment along the path back to the staging column.
        while col_cur != n {
            let back = prev_col[col_cur];
            row_of_col[col_cur] = row_of_col[back];
            col_cur = back;
        }
    }

    let mut row_to_col = vec![NONE; n];
    for col in 0..n {
        if row_of_col[col] != NONE {
            row_to_col[row_of_col[col]] = col;
        }
    }
    debug_assert!(row_to_col.iter().all(|&c| c != NONE));

    let total = row_to_col
        .iter()
        .enumerate()
        .map(|(row, &col)| prob.get(row, col))
        .sum();
    Assignment { total, row_to_col }
}
