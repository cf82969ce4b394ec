//! Dense two-phase tableau simplex with Bland's rule. Slow and simple; it
//! exists to cross-check [`super::solve`] on small instances.

use crate::error::{Error, Result};

use super::{FractionalSolution, LpProblem};

pub const REFERENCE_MAX_N: usize = 50;

const EPS: f64 = 1e-11;

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
    pivots: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = 1.0 / self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v *= inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                let f = row[c];
                if f != 0.0 {
                    for (v, p) in row.iter_mut().zip(&pivot_row) {
                        *v -= f * p;
                    }
                }
            }
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Minimises `cost` over the current feasible basis; columns flagged in
    /// `blocked` may not enter.
    fn optimise(&mut self, cost: &[f64], blocked: &[bool]) {
        let rhs = self.cols;
        loop {
            // reduced costs d_j = c_j - c_B' B^{-1} a_j, read off the tableau
            let entering = (0..self.cols).find(|&j| {
                !blocked[j] && !self.basis.contains(&j) && {
                    let d = cost[j]
                        - self
                            .rows
                            .iter()
                            .zip(&self.basis)
                            .map(|(row, &b)| cost[b] * row[j])
                            .sum::<f64>();
                    d < -EPS * (1.0 + cost[j].abs())
                }
            });
            let Some(c) = entering else { return };
            let mut leave: Option<(usize, f64)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if row[c] > EPS {
                    let ratio = row[rhs] / row[c];
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - EPS
                                || (ratio <= lratio + EPS && self.basis[r] < self.basis[lr])
                            {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                // unbounded; impossible with positive costs
                return;
            };
            self.pivot(r, c);
        }
    }
}

/// Exact-quality optimum of `min c'x  s.t.  A x >= 1, 0 <= x <= 1` by a dense
/// two-phase simplex over the full standard form.
pub fn reference_solve(problem: &LpProblem) -> Result<FractionalSolution> {
    let n = problem.dim();
    if n > REFERENCE_MAX_N {
        return Err(Error::SizeLimit { n, max: REFERENCE_MAX_N });
    }
    // columns: x (n) | surplus (n) | bound slack (n) | artificial (n) | rhs
    let cols = 4 * n;
    let mut rows = Vec::with_capacity(2 * n);
    for u in 0..n {
        let mut row = vec![0.0; cols + 1];
        for &j in problem.coverage.row(u) {
            row[j] = 1.0;
        }
        row[n + u] = -1.0;
        row[3 * n + u] = 1.0;
        row[cols] = 1.0;
        rows.push(row);
    }
    for j in 0..n {
        let mut row = vec![0.0; cols + 1];
        row[j] = 1.0;
        row[2 * n + j] = 1.0;
        row[cols] = 1.0;
        rows.push(row);
    }
    let basis = (0..n).map(|u| 3 * n + u).chain((0..n).map(|j| 2 * n + j)).collect();
    let mut t = Tableau { rows, basis, cols, pivots: 0 };

    let mut phase1 = vec![0.0; cols];
    phase1[3 * n..].fill(1.0);
    t.optimise(&phase1, &vec![false; cols]);

    // drive zero-valued artificials out of the basis
    for r in 0..t.rows.len() {
        if t.basis[r] >= 3 * n {
            if let Some(c) = (0..3 * n).find(|&c| t.rows[r][c].abs() > 1e-9) {
                t.pivot(r, c);
            }
        }
    }

    let mut phase2 = vec![0.0; cols];
    phase2[..n].copy_from_slice(&problem.cost.values);
    let mut blocked = vec![false; cols];
    blocked[3 * n..].fill(true);
    t.optimise(&phase2, &blocked);

    let mut x = vec![0.0; n];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rows[r][cols].clamp(0.0, 1.0);
        }
    }
    Ok(FractionalSolution::evaluate(problem, x, t.pivots, true))
}
