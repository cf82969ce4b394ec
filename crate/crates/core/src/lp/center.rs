//! Mehrotra predictor-corrector interior point method on a column subset of
//! the covering LP. Used to recover the central point of a non-unique optimal
//! face once the simplex has identified which columns can be nonzero.

use crate::graph::CoverageMatrix;

const MAX_ITER: usize = 100;
const STEP_FRACTION: f64 = 0.995;

pub(crate) struct CenterResult {
    pub x: Vec<f64>,
    pub iterations: usize,
}

/// Solves `min c_F' x_F  s.t.  A[:, F] x_F >= 1, x_F >= 0` and returns the
/// full-length primal vector (zero outside `cols`). Returns `None` if the
/// method fails to reach `tol` relative accuracy.
pub(crate) fn interior_point(a: &CoverageMatrix, cost: &[f64], cols: &[usize], tol: f64) -> Option<CenterResult> {
    let n = a.dim();
    let f = cols.len();
    let mut local = vec![usize::MAX; n];
    for (i, &j) in cols.iter().enumerate() {
        local[j] = i;
    }
    // restricted rows, as local column indices
    let rows: Vec<Vec<usize>> = (0..n)
        .map(|u| a.row(u).iter().filter_map(|&j| (local[j] != usize::MAX).then_some(local[j])).collect())
        .collect();
    if rows.iter().any(Vec::is_empty) {
        return None;
    }
    let c: Vec<f64> = cols.iter().map(|&j| cost[j]).collect();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); f];
    for (u, row) in rows.iter().enumerate() {
        for &i in row {
            col_rows[i].push(u);
        }
    }
    let ax = |x: &[f64]| -> Vec<f64> { rows.iter().map(|r| r.iter().map(|&i| x[i]).sum()).collect() };
    let aty = |y: &[f64]| -> Vec<f64> { col_rows.iter().map(|r| r.iter().map(|&u| y[u]).sum()).collect() };

    let max_col = col_rows.iter().map(Vec::len).max().unwrap_or(1) as f64;
    let mut x = vec![1.0; f];
    let mut z = c.clone();
    let mut y: Vec<f64> = rows
        .iter()
        .map(|r| 0.5 * r.iter().map(|&i| c[i]).fold(f64::INFINITY, f64::min) / max_col)
        .collect();
    let mut w: Vec<f64> = ax(&x).iter().map(|v| (v - 1.0).max(1.0)).collect();
    let c_norm = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let dim = (f + n) as f64;

    for iter in 0..MAX_ITER {
        let axv = ax(&x);
        let atyv = aty(&y);
        let rp: Vec<f64> = (0..n).map(|u| axv[u] - w[u] - 1.0).collect();
        let rd: Vec<f64> = (0..f).map(|i| atyv[i] + z[i] - c[i]).collect();
        let gap: f64 = x.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>()
            + w.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>();
        let pobj: f64 = c.iter().zip(&x).map(|(a, b)| a * b).sum();
        let rp_norm = rp.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let rd_norm = rd.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if rp_norm <= tol && rd_norm <= tol * (1.0 + c_norm) && gap <= tol * (1.0 + pobj.abs()) {
            let mut full = vec![0.0; n];
            for (i, &j) in cols.iter().enumerate() {
                full[j] = x[i];
            }
            return Some(CenterResult { x: full, iterations: iter });
        }
        let mu = gap / dim;

        // normal matrix N = A' diag(y/w) A + diag(z/x), dense lower Cholesky
        let mut nm = vec![0.0; f * f];
        for (u, row) in rows.iter().enumerate() {
            let e = y[u] / w[u];
            for &i in row {
                for &j in row {
                    if j <= i {
                        nm[i * f + j] += e;
                    }
                }
            }
        }
        let mut max_diag = 0.0f64;
        for i in 0..f {
            nm[i * f + i] += z[i] / x[i];
            max_diag = max_diag.max(nm[i * f + i]);
        }
        for i in 0..f {
            nm[i * f + i] += 1e-14 * max_diag;
        }
        if !cholesky(&mut nm, f) {
            return None;
        }

        let solve_dir = |rxz: &[f64], rwy: &[f64]| -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
            let tmp: Vec<f64> = (0..n).map(|u| (rwy[u] - y[u] * rp[u]) / w[u]).collect();
            let at = aty(&tmp);
            let mut rhs: Vec<f64> = (0..f).map(|i| rd[i] + rxz[i] / x[i] + at[i]).collect();
            cholesky_solve(&nm, f, &mut rhs);
            let dx = rhs;
            let adx = ax(&dx);
            let dy: Vec<f64> = (0..n).map(|u| y[u] / w[u] * (-rp[u] - adx[u]) + rwy[u] / w[u]).collect();
            let dw: Vec<f64> = (0..n).map(|u| (rwy[u] - w[u] * dy[u]) / y[u]).collect();
            let dz: Vec<f64> = (0..f).map(|i| (rxz[i] - z[i] * dx[i]) / x[i]).collect();
            (dx, dw, dy, dz)
        };

        // predictor
        let rxz: Vec<f64> = (0..f).map(|i| -x[i] * z[i]).collect();
        let rwy: Vec<f64> = (0..n).map(|u| -w[u] * y[u]).collect();
        let (dxa, dwa, dya, dza) = solve_dir(&rxz, &rwy);
        let ap = max_step(&x, &dxa).min(max_step(&w, &dwa));
        let ad = max_step(&z, &dza).min(max_step(&y, &dya));
        let mu_aff = ((0..f).map(|i| (x[i] + ap * dxa[i]) * (z[i] + ad * dza[i])).sum::<f64>()
            + (0..n).map(|u| (w[u] + ap * dwa[u]) * (y[u] + ad * dya[u])).sum::<f64>())
            / dim;
        let sigma = (mu_aff / mu).powi(3).clamp(0.0, 1.0);

        // corrector
        let rxz: Vec<f64> = (0..f).map(|i| sigma * mu - x[i] * z[i] - dxa[i] * dza[i]).collect();
        let rwy: Vec<f64> = (0..n).map(|u| sigma * mu - w[u] * y[u] - dwa[u] * dya[u]).collect();
        let (dx, dw, dy, dz) = solve_dir(&rxz, &rwy);
        let ap = (STEP_FRACTION * max_step(&x, &dx).min(max_step(&w, &dw))).min(1.0);
        let ad = (STEP_FRACTION * max_step(&z, &dz).min(max_step(&y, &dy))).min(1.0);
        for i in 0..f {
            x[i] += ap * dx[i];
            z[i] += ad * dz[i];
        }
        for u in 0..n {
            w[u] += ap * dw[u];
            y[u] += ad * dy[u];
        }
    }
    None
}

/// Largest step in `[0, inf)` keeping `v + t dv >= 0`.
fn max_step(v: &[f64], dv: &[f64]) -> f64 {
    v.iter()
        .zip(dv)
        .filter(|(_, &d)| d < 0.0)
        .map(|(&a, &d)| -a / d)
        .fold(f64::INFINITY, f64::min)
}

/// In-place lower Cholesky of a row-major `f x f` matrix (lower triangle used).
fn cholesky(m: &mut [f64], f: usize) -> bool {
    for j in 0..f {
        let mut d = m[j * f + j];
        for k in 0..j {
            d -= m[j * f + k] * m[j * f + k];
        }
        if d.is_nan() || d <= 0.0 {
            return false;
        }
        let d = d.sqrt();
        m[j * f + j] = d;
        for i in j + 1..f {
            let mut s = m[i * f + j];
            for k in 0..j {
                s -= m[i * f + k] * m[j * f + k];
            }
            m[i * f + j] = s / d;
        }
    }
    true
}

fn cholesky_solve(l: &[f64], f: usize, b: &mut [f64]) {
    for i in 0..f {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * f + k] * b[k];
        }
        b[i] = s / l[i * f + i];
    }
    for i in (0..f).rev() {
        let mut s = b[i];
        for k in i + 1..f {
            s -= l[k * f + i] * b[k];
        }
        b[i] = s / l[i * f + i];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_coverage_matrix, Graph};

    #[test]
    fn six_cycle_center_is_uniform() {
        // C6 with unit costs: optimal face is {x_j = q_(j mod 3)}, centre 1/3
        let a = build_coverage_matrix(&Graph::cycle(6).unwrap());
        let cols: Vec<usize> = (0..6).collect();
        let res = interior_point(&a, &[1.0; 6], &cols, 1e-10).unwrap();
        for v in res.x {
            assert!((v - 1.0 / 3.0).abs() < 1e-6, "{v}");
        }
    }

    #[test]
    fn cholesky_solves_spd_system() {
        let mut m = vec![4.0, 0.0, 2.0, 3.0];
        assert!(cholesky(&mut m, 2));
        let mut b = vec![6.0, 5.0];
        cholesky_solve(&m, 2, &mut b);
        // [[4,2],[2,3]] x = [6,5] -> x = [1, 1]
        assert!((b[0] - 1.0).abs() < 1e-12 && (b[1] - 1.0).abs() < 1e-12);
    }
}
