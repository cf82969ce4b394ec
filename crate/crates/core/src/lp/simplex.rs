//! Revised simplex specialised to the covering LP
//! `min c'x  s.t.  A x - s = 1,  x, s >= 0` with a symmetric 0/1 matrix `A`.
//!
//! Slack columns are `-e_u`, so a basis is determined by its basic structurals
//! `Sx` and the rows whose slack is nonbasic (`Rx`, the tight rows). The two
//! sets always have equal size and every basis solve reduces to the square
//! kernel `K = A[Rx, Sx]`. Only the explicit inverse of `K` is stored and it is
//! updated in `O(k^2)` per pivot; `k` is the number of basic structurals,
//! which stays far below `n` on sparse graphs.

use super::kinv::{axpy, dot, DenseInverse};
use crate::graph::CoverageMatrix;

const NONE: usize = usize::MAX;
const PIVOT_TOL: f64 = 1e-9;
const PRIMAL_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-10;
/// Pivots without dual-objective progress before switching to Bland's rule.
const STALL_LIMIT: usize = 200;
const REFRESH_EVERY: usize = 64;
/// Relative size of the reduced costs created by cost shifting.
const PERTURBATION: f64 = 1e-7;
const MIN_WEIGHT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Var {
    X(usize),
    S(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Outcome {
    Optimal,
    IterationLimit,
    /// No entering candidate in a ratio test; cannot happen for covering
    /// instances short of numerical breakdown.
    Breakdown,
}

pub(crate) struct KernelSimplex<'a> {
    a: &'a CoverageMatrix,
    n: usize,
    base_cost: &'a [f64],
    cost: Vec<f64>,
    kc: Vec<usize>,
    kr: Vec<usize>,
    col_pos: Vec<usize>,
    row_pos: Vec<usize>,
    /// `kinv[b][a]`, the inverse of `K[a][b] = A[kr[a]][kc[b]]`.
    kinv: DenseInverse,
    x: Vec<f64>,
    s: Vec<f64>,
    dx: Vec<f64>,
    y: Vec<f64>,
    pub iterations: usize,
    since_refresh: usize,
    /// Dual steepest-edge weights, indexed like `var_index`.
    weight: Vec<f64>,
    // scratch
    rho: Vec<f64>,
    alpha: Vec<f64>,
    acc: Vec<f64>,
    tau: Vec<f64>,
    cands: Vec<(Var, f64, f64)>,
    ratios: Vec<f64>,
}

struct Column {
    /// `K^{-1}` applied to the kernel part of the entering column.
    t: Vec<f64>,
    /// Entry of `B^{-1} a_q` for every basic slack row (dense, `n`).
    slack: Vec<f64>,
}

impl<'a> KernelSimplex<'a> {
    /// All-slack basis: dual feasible for positive costs.
    pub fn new(a: &'a CoverageMatrix, cost: &'a [f64]) -> Self {
        let n = a.dim();
        Self {
            a,
            n,
            base_cost: cost,
            cost: cost.to_vec(),
            kc: Vec::new(),
            kr: Vec::new(),
            col_pos: vec![NONE; n],
            row_pos: vec![NONE; n],
            kinv: DenseInverse::default(),
            x: vec![0.0; n],
            s: vec![-1.0; n],
            dx: cost.to_vec(),
            y: vec![0.0; n],
            iterations: 0,
            since_refresh: 0,
            weight: vec![1.0; 2 * n],
            rho: vec![0.0; n],
            alpha: vec![0.0; n],
            acc: vec![0.0; n],
            tau: Vec::new(),
            cands: Vec::new(),
            ratios: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.kc.len()
    }

    pub fn primal(&self) -> &[f64] {
        &self.x
    }

    pub fn duals(&self) -> &[f64] {
        &self.y
    }

    pub fn reduced_costs(&self) -> &[f64] {
        &self.dx
    }

    pub fn is_basic_x(&self, j: usize) -> bool {
        self.col_pos[j] != NONE
    }

    pub fn is_tight_row(&self, u: usize) -> bool {
        self.row_pos[u] != NONE
    }

    fn dual_tol(&self, j: usize) -> f64 {
        DUAL_TOL * (1.0 + self.base_cost[j])
    }

    // ---- basis solves -------------------------------------------------

    /// Recomputes basic values from the kernel inverse.
    pub fn refresh_primal(&mut self) {
        self.x.fill(0.0);
        let ones = vec![1.0; self.k()];
        for (b, row) in self.kinv.rows().enumerate() {
            self.x[self.kc[b]] = dot(row, &ones);
        }
        for u in 0..self.n {
            self.s[u] = if self.row_pos[u] != NONE {
                0.0
            } else {
                self.a.row(u).iter().map(|&j| self.x[j]).sum::<f64>() - 1.0
            };
        }
    }

    /// Recomputes duals and reduced costs for the working costs.
    pub fn refresh_dual(&mut self) {
        self.y.fill(0.0);
        for (b, row) in self.kinv.rows().enumerate() {
            let cb = self.cost[self.kc[b]];
            for (a, v) in row.iter().enumerate() {
                self.y[self.kr[a]] += v * cb;
            }
        }
        for j in 0..self.n {
            self.dx[j] = if self.col_pos[j] != NONE {
                0.0
            } else {
                self.cost[j] - self.a.row(j).iter().map(|&u| self.y[u]).sum::<f64>()
            };
        }
    }

    fn refresh(&mut self) {
        self.refresh_primal();
        self.refresh_dual();
        self.since_refresh = 0;
    }

    /// Largest residual of `K^{-1} K = I` over a cheap probe (`K^{-1} K 1`).
    fn kernel_residual(&self) -> f64 {
        let k = self.k();
        // K 1: row sums restricted to kernel columns
        let mut k1 = vec![0.0; k];
        for (a, &u) in self.kr.iter().enumerate() {
            k1[a] = self.a.row(u).iter().filter(|&&j| self.col_pos[j] != NONE).count() as f64;
        }
        self.kinv
            .rows()
            .map(|row| (dot(row, &k1) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Rebuilds the kernel inverse by Gauss-Jordan elimination.
    pub fn refactor(&mut self) -> bool {
        let k = self.k();
        let mut m = vec![vec![0.0f64; 2 * k]; k];
        for (a, &u) in self.kr.iter().enumerate() {
            for &j in self.a.row(u) {
                let b = self.col_pos[j];
                if b != NONE {
                    m[a][b] = 1.0;
                }
            }
            m[a][k + a] = 1.0;
        }
        for col in 0..k {
            let piv = (col..k)
                .max_by(|&p, &q| m[p][col].abs().total_cmp(&m[q][col].abs()).then(q.cmp(&p)))
                .expect("nonempty range");
            if m[piv][col].abs() < 1e-12 {
                return false;
            }
            m.swap(col, piv);
            let inv = 1.0 / m[col][col];
            for v in m[col].iter_mut() {
                *v *= inv;
            }
            let pivot_row = m[col].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r == col {
                    continue;
                }
                let f = row[col];
                if f != 0.0 {
                    for (v, p) in row.iter_mut().zip(&pivot_row) {
                        *v -= f * p;
                    }
                }
            }
        }
        // m = [I | K^{-1}] with K^{-1} indexed [column b][row a]
        self.kinv.assign(k, &m, k);
        self.refresh();
        true
    }

    /// Row of `B^{-1}` for the basic variable `leaving`, written to `self.rho`
    /// (dense over rows). Also returns the kernel part for slack leavers,
    /// which equals `A[u, Sx] K^{-1}`.
    fn btran(&mut self, leaving: Var) -> Option<Vec<f64>> {
        self.rho.fill(0.0);
        match leaving {
            Var::X(j) => {
                let b = self.col_pos[j];
                for (a, &v) in self.kinv.row(b).iter().enumerate() {
                    self.rho[self.kr[a]] = v;
                }
                None
            }
            Var::S(u) => {
                let srow = self.slack_row(u);
                for (a, &v) in srow.iter().enumerate() {
                    self.rho[self.kr[a]] = v;
                }
                self.rho[u] = -1.0;
                Some(srow)
            }
        }
    }

    /// `A[u, Sx] K^{-1}`.
    fn slack_row(&self, u: usize) -> Vec<f64> {
        let mut srow = vec![0.0; self.k()];
        for &j in self.a.row(u) {
            let b = self.col_pos[j];
            if b != NONE {
                axpy(&mut srow, 1.0, self.kinv.row(b));
            }
        }
        srow
    }

    /// Pivot-row entries for structurals from `self.rho`, into `self.alpha`.
    fn pivot_row(&mut self) {
        self.alpha.fill(0.0);
        for w in 0..self.n {
            let r = self.rho[w];
            if r != 0.0 {
                for &j in self.a.row(w) {
                    self.alpha[j] += r;
                }
            }
        }
    }

    fn ftran(&mut self, entering: Var) -> Column {
        let k = self.k();
        let mut t = vec![0.0; k];
        match entering {
            Var::X(q) => {
                for &u in self.a.row(q) {
                    let a = self.row_pos[u];
                    if a != NONE {
                        for (b, tb) in t.iter_mut().enumerate() {
                            *tb += self.kinv.get(b, a);
                        }
                    }
                }
            }
            Var::S(p) => {
                let a = self.row_pos[p];
                for (b, tb) in t.iter_mut().enumerate() {
                    *tb = -self.kinv.get(b, a);
                }
            }
        }
        self.acc.fill(0.0);
        for (b, &tb) in t.iter().enumerate() {
            if tb != 0.0 {
                for &u in self.a.row(self.kc[b]) {
                    self.acc[u] += tb;
                }
            }
        }
        if let Var::X(q) = entering {
            for &u in self.a.row(q) {
                self.acc[u] -= 1.0;
            }
        }
        Column { t, slack: self.acc.clone() }
    }

    fn value(&self, v: Var) -> f64 {
        match v {
            Var::X(j) => self.x[j],
            Var::S(u) => self.s[u],
        }
    }

    /// Entry of the FTRAN'd column at the basic variable `v`.
    fn column_entry(&self, col: &Column, v: Var) -> f64 {
        match v {
            Var::X(j) => col.t[self.col_pos[j]],
            Var::S(u) => col.slack[u],
        }
    }

    /// Basis change `leaving -> entering` with a precomputed FTRAN column.
    /// `srow` is `A[u, Sx] K^{-1}` when the leaver is the slack of row `u`.
    /// With `track_weights`, `self.rho` must hold the leaving row of the
    /// old basis.
    fn update_basis(&mut self, leaving: Var, entering: Var, col: &Column, srow: Option<Vec<f64>>, track_weights: bool) {
        let theta = self.value(leaving) / self.column_entry(col, leaving);
        // primal values
        for (b, &tb) in col.t.iter().enumerate() {
            self.x[self.kc[b]] -= theta * tb;
        }
        for u in 0..self.n {
            if self.row_pos[u] == NONE {
                self.s[u] -= theta * col.slack[u];
            }
        }
        match leaving {
            Var::X(j) => self.x[j] = 0.0,
            Var::S(u) => self.s[u] = 0.0,
        }
        match entering {
            Var::X(q) => self.x[q] = theta,
            Var::S(p) => self.s[p] = theta,
        }

        let srow = match leaving {
            Var::S(u) => Some(srow.unwrap_or_else(|| self.slack_row(u))),
            Var::X(_) => None,
        };
        if track_weights {
            let (kr, rho) = (&self.kr, &self.rho);
            self.kinv.set_probe(|p| p.extend(kr.iter().map(|&u| rho[u])));
        }
        match (leaving, entering) {
            (Var::X(j), Var::X(_)) => self.kinv.replace_column(self.col_pos[j], &col.t),
            (Var::X(j), Var::S(p)) => self.kinv.shrink(self.col_pos[j], self.row_pos[p]),
            // sigma = A[u,q] - A[u,Sx] t = -(pivot entry)
            (Var::S(u), Var::X(_)) => self.kinv.grow(&col.t, srow.as_deref().unwrap_or_default(), -col.slack[u]),
            (Var::S(_), Var::S(p)) => self.kinv.replace_row(self.row_pos[p], srow.as_deref().unwrap_or_default()),
        }
        if track_weights {
            self.update_weights(leaving, entering, col);
        }
        match (leaving, entering) {
            (Var::X(j), Var::X(q)) => {
                let b = self.col_pos[j];
                self.kc[b] = q;
                self.col_pos[j] = NONE;
                self.col_pos[q] = b;
            }
            (Var::X(j), Var::S(p)) => self.remove_indices(self.col_pos[j], self.row_pos[p]),
            (Var::S(u), Var::X(q)) => self.push_indices(u, q),
            (Var::S(u), Var::S(p)) => {
                let a = self.row_pos[p];
                self.kr[a] = u;
                self.row_pos[p] = NONE;
                self.row_pos[u] = a;
            }
        }
        self.iterations += 1;
        self.since_refresh += 1;
    }

    /// Adds kernel row `u` and column `q` (bordering).
    fn grow(&mut self, u: usize, q: usize, t: &[f64], srow: &[f64], sigma: f64) {
        self.kinv.grow(t, srow, sigma);
        self.push_indices(u, q);
    }

    fn push_indices(&mut self, u: usize, q: usize) {
        self.col_pos[q] = self.kc.len();
        self.kc.push(q);
        self.row_pos[u] = self.kr.len();
        self.kr.push(u);
    }

    /// Removes kernel column position `b` and row position `a`.
    fn shrink(&mut self, b: usize, a: usize) {
        self.kinv.shrink(b, a);
        self.remove_indices(b, a);
    }

    fn remove_indices(&mut self, b: usize, a: usize) {
        let j = self.kc[b];
        self.col_pos[j] = NONE;
        self.kc.swap_remove(b);
        if b < self.kc.len() {
            self.col_pos[self.kc[b]] = b;
        }
        let u = self.kr[a];
        self.row_pos[u] = NONE;
        self.kr.swap_remove(a);
        if a < self.kr.len() {
            self.row_pos[self.kr[a]] = a;
        }
    }

    fn basic_vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.kc
            .iter()
            .map(|&j| Var::X(j))
            .chain((0..self.n).filter(|&u| self.row_pos[u] == NONE).map(Var::S))
    }

    fn var_index(&self, v: Var) -> usize {
        match v {
            Var::X(j) => j,
            Var::S(u) => self.n + u,
        }
    }

    fn dual_objective(&self) -> f64 {
        self.kr.iter().map(|&u| self.y[u]).sum()
    }

    // ---- dual simplex -------------------------------------------------

    /// Most infeasible basic variable relative to its steepest-edge weight.
    fn choose_leaving_dual(&self, bland: bool) -> Option<Var> {
        // (var_index, score)
        let mut best: Option<(usize, f64)> = None;
        let mut consider = |idx: usize, val: f64, weight: f64| {
            let score = val * val / weight;
            let better = match best {
                None => true,
                Some((bi, _)) if bland => idx < bi,
                Some((bi, bs)) => score > bs || (score == bs && idx < bi),
            };
            if better {
                best = Some((idx, score));
            }
        };
        for &j in &self.kc {
            let val = self.x[j];
            if val < -PRIMAL_TOL {
                consider(j, val, self.weight[j]);
            }
        }
        for (u, &val) in self.s.iter().enumerate() {
            if val < -PRIMAL_TOL && self.row_pos[u] == NONE {
                consider(self.n + u, val, self.weight[self.n + u]);
            }
        }
        best.map(|(idx, _)| if idx < self.n { Var::X(idx) } else { Var::S(idx - self.n) })
    }

    /// Dual steepest-edge update. Weights are `||e_i' B^{-1}||^2`. Runs after
    /// the inverse update but before the basis indices change.
    fn update_weights(&mut self, leaving: Var, entering: Var, col: &Column) {
        let alpha_r = self.column_entry(col, leaving);
        let w_r: f64 = match leaving {
            Var::X(_) => self.kr.iter().map(|&u| self.rho[u] * self.rho[u]).sum(),
            Var::S(_) => 1.0 + self.kr.iter().map(|&u| self.rho[u] * self.rho[u]).sum::<f64>(),
        };
        // tau = B^{-1} rho, recorded by the inverse update
        let tau = std::mem::take(&mut self.tau);
        let mut tau = tau;
        tau.clear();
        tau.extend_from_slice(self.kinv.probed());
        for (b, (&tb, &tau_b)) in col.t.iter().zip(&tau).enumerate() {
            if tb != 0.0 {
                let i = self.kc[b];
                let ratio = tb / alpha_r;
                self.weight[i] = (self.weight[i] + ratio * (ratio * w_r - 2.0 * tau_b)).max(MIN_WEIGHT);
            }
        }
        self.acc.fill(0.0);
        for (b, &tau_b) in tau.iter().enumerate() {
            if tau_b != 0.0 {
                for &u in self.a.row(self.kc[b]) {
                    self.acc[u] += tau_b;
                }
            }
        }
        for u in 0..self.n {
            let cu = col.slack[u];
            if self.row_pos[u] == NONE && cu != 0.0 {
                let ratio = cu / alpha_r;
                let tau_u = self.acc[u] - self.rho[u];
                let w = &mut self.weight[self.n + u];
                *w = (*w + ratio * (ratio * w_r - 2.0 * tau_u)).max(MIN_WEIGHT);
            }
        }
        self.tau = tau;
        let e = self.var_index(entering);
        self.weight[e] = (w_r / (alpha_r * alpha_r)).max(MIN_WEIGHT);
    }

    /// Nonbasic candidates `(var, reduced cost, alpha)` with `alpha < 0`,
    /// written to `self.cands`.
    fn dual_candidates(&mut self) {
        self.cands.clear();
        for (j, &al) in self.alpha.iter().enumerate() {
            if al < -PIVOT_TOL && self.col_pos[j] == NONE {
                self.cands.push((Var::X(j), self.dx[j], al));
            }
        }
        for &p in &self.kr {
            let al = -self.rho[p];
            if al < -PIVOT_TOL {
                self.cands.push((Var::S(p), self.y[p], al));
            }
        }
    }

    fn choose_entering_dual(&mut self, bland: bool) -> Option<(Var, f64, f64)> {
        self.dual_candidates();
        let cands = &self.cands;
        if bland {
            let min_ratio = cands.iter().map(|&(_, d, al)| d.max(0.0) / -al).fold(f64::INFINITY, f64::min);
            return cands
                .iter()
                .copied()
                .filter(|&(_, d, al)| d.max(0.0) / -al <= min_ratio * (1.0 + 1e-12) + 1e-300)
                .min_by_key(|&(v, _, _)| self.var_index(v));
        }
        // Harris two-pass ratio test
        self.ratios.clear();
        let mut bound = f64::INFINITY;
        for &(v, d, al) in cands {
            let tol = match v {
                Var::X(j) => self.dual_tol(j),
                Var::S(_) => DUAL_TOL,
            };
            let inv = -1.0 / al;
            let ratio = d * inv;
            self.ratios.push(ratio);
            bound = bound.min(ratio + tol * inv);
        }
        let mut best: Option<(Var, f64, f64)> = None;
        for (&(v, d, al), &ratio) in cands.iter().zip(&self.ratios) {
            if ratio > bound {
                continue;
            }
            let better = match best {
                None => true,
                Some((bv, _, bal)) => al < bal || (al == bal && self.var_index(v) < self.var_index(bv)),
            };
            if better {
                best = Some((v, d, al));
            }
        }
        best
    }

    /// Runs dual simplex pivots until primal feasibility. Requires a dual
    /// feasible starting basis for the working costs.
    pub fn dual_simplex(&mut self, max_iterations: usize) -> Outcome {
        let mut best_obj = self.dual_objective();
        let mut stall = 0usize;
        loop {
            if self.since_refresh >= REFRESH_EVERY {
                self.check_and_refresh();
            }
            let bland = stall >= STALL_LIMIT;
            let Some(leaving) = self.choose_leaving_dual(bland) else {
                // confirm with fresh values before declaring feasibility
                self.check_and_refresh();
                if self.choose_leaving_dual(false).is_none() {
                    return Outcome::Optimal;
                }
                continue;
            };
            if self.iterations >= max_iterations {
                return Outcome::IterationLimit;
            }
            let srow = self.btran(leaving);
            self.pivot_row();
            let Some((entering, d_q, alpha_q)) = self.choose_entering_dual(bland) else {
                return Outcome::Breakdown;
            };
            let col = self.ftran(entering);
            let piv = self.column_entry(&col, leaving);
            if (piv - alpha_q).abs() > 1e-7 * (1.0 + alpha_q.abs()) {
                // row and column disagree: inverse has drifted
                if !self.refactor() {
                    return Outcome::Breakdown;
                }
                continue;
            }
            // dual step
            let theta_d = d_q.max(0.0) / alpha_q;
            if theta_d != 0.0 {
                for j in 0..self.n {
                    if self.col_pos[j] == NONE {
                        self.dx[j] -= theta_d * self.alpha[j];
                    }
                }
                for &p in &self.kr {
                    self.y[p] -= theta_d * -self.rho[p];
                }
            }
            match entering {
                Var::X(q) => self.dx[q] = 0.0,
                Var::S(p) => self.y[p] = 0.0,
            }
            let d_leave = -theta_d;
            self.update_basis(leaving, entering, &col, srow, true);
            match leaving {
                Var::X(j) => self.dx[j] = d_leave,
                Var::S(u) => self.y[u] = d_leave,
            }
            let obj = self.dual_objective();
            if obj > best_obj + 1e-12 * (1.0 + best_obj.abs()) {
                best_obj = obj;
                stall = 0;
            } else {
                stall += 1;
            }
        }
    }

    fn check_and_refresh(&mut self) {
        if self.kernel_residual() > 1e-9 {
            self.refactor();
        } else {
            self.refresh();
        }
    }

    // ---- primal simplex -----------------------------------------------

    fn choose_entering_primal(&self, bland: bool) -> Option<Var> {
        let mut best: Option<(Var, f64)> = None;
        let cands = (0..self.n)
            .filter(|&j| self.col_pos[j] == NONE && self.dx[j] < -self.dual_tol(j))
            .map(|j| (Var::X(j), self.dx[j]))
            .chain(self.kr.iter().filter(|&&p| self.y[p] < -DUAL_TOL).map(|&p| (Var::S(p), self.y[p])));
        for (v, d) in cands {
            best = match best {
                None => Some((v, d)),
                Some((bv, bd)) => {
                    let better = if bland { self.var_index(v) < self.var_index(bv) } else { d < bd };
                    if better { Some((v, d)) } else { Some((bv, bd)) }
                }
            };
        }
        best.map(|(v, _)| v)
    }

    /// Runs primal simplex pivots from a primal feasible basis until dual
    /// feasibility for the working costs.
    pub fn primal_simplex(&mut self, max_iterations: usize) -> Outcome {
        let mut stall = 0usize;
        let mut best_obj: f64 = (0..self.n).map(|j| self.cost[j] * self.x[j]).sum();
        loop {
            self.refresh_dual();
            let bland = stall >= STALL_LIMIT;
            let Some(entering) = self.choose_entering_primal(bland) else {
                return Outcome::Optimal;
            };
            if self.iterations >= max_iterations {
                return Outcome::IterationLimit;
            }
            let col = self.ftran(entering);
            let basics: Vec<Var> = self.basic_vars().collect();
            let mut cands: Vec<(Var, f64, f64)> = basics
                .into_iter()
                .filter_map(|v| {
                    let al = self.column_entry(&col, v);
                    (al > PIVOT_TOL).then(|| (v, self.value(v), al))
                })
                .collect();
            if cands.is_empty() {
                return Outcome::Breakdown;
            }
            let leaving = if bland {
                let min_ratio =
                    cands.iter().map(|&(_, x, al)| x.max(0.0) / al).fold(f64::INFINITY, f64::min);
                cands.retain(|&(_, x, al)| x.max(0.0) / al <= min_ratio * (1.0 + 1e-12) + 1e-300);
                cands.iter().min_by_key(|c| self.var_index(c.0)).map(|c| c.0)
            } else {
                let bound = cands
                    .iter()
                    .map(|&(_, x, al)| (x + PRIMAL_TOL) / al)
                    .fold(f64::INFINITY, f64::min);
                cands
                    .iter()
                    .filter(|&&(_, x, al)| x / al <= bound)
                    .max_by(|p, q| {
                        p.2.total_cmp(&q.2).then(self.var_index(q.0).cmp(&self.var_index(p.0)))
                    })
                    .map(|c| c.0)
            }
            .expect("nonempty candidates");
            // clamp tiny negative values so the step stays nonnegative
            match leaving {
                Var::X(j) => self.x[j] = self.x[j].max(0.0),
                Var::S(u) => self.s[u] = self.s[u].max(0.0),
            }
            self.update_basis(leaving, entering, &col, None, false);
            let obj: f64 = (0..self.n).map(|j| self.cost[j] * self.x[j]).sum();
            if obj < best_obj - 1e-12 * (1.0 + best_obj.abs()) {
                best_obj = obj;
                stall = 0;
            } else {
                stall += 1;
            }
            if self.since_refresh >= REFRESH_EVERY {
                self.check_and_refresh();
            }
        }
    }

    // ---- warm start ---------------------------------------------------

    /// Builds a starting basis from a primal point: columns in its support
    /// (largest first) are paired with tight rows while the kernel stays
    /// well conditioned. Negative row duals are then removed from the kernel
    /// and remaining dual infeasibilities are absorbed by cost shifts.
    pub fn crash(&mut self, x0: &[f64]) {
        let ax = self.a.mul_vec(x0);
        let mut support: Vec<usize> = (0..self.n).filter(|&j| x0[j] > 1e-9).collect();
        support.sort_by(|&p, &q| x0[q].total_cmp(&x0[p]).then(p.cmp(&q)));
        for q in support {
            let rows: Vec<usize> = self
                .a
                .row(q)
                .iter()
                .copied()
                .filter(|&u| self.row_pos[u] == NONE && (ax[u] - 1.0).abs() <= 1e-7)
                .collect();
            if rows.is_empty() {
                continue;
            }
            let col = self.ftran(Var::X(q));
            // sigma for row u is -(B^{-1} a_q)_u
            let pick = rows
                .into_iter()
                .map(|u| (u, -col.slack[u]))
                .filter(|&(_, sigma)| sigma.abs() > 1e-7)
                .max_by(|p, q| p.1.abs().total_cmp(&q.1.abs()).then(q.0.cmp(&p.0)));
            if let Some((u, sigma)) = pick {
                let srow = self.slack_row(u);
                self.grow(u, q, &col.t, &srow, sigma);
            }
        }
        self.refresh();
        // keep row duals nonnegative
        loop {
            let worst = self
                .kr
                .iter()
                .enumerate()
                .filter(|&(_, &u)| self.y[u] < -DUAL_TOL)
                .min_by(|p, q| self.y[*p.1].total_cmp(&self.y[*q.1]).then(p.1.cmp(q.1)))
                .map(|(a, _)| a);
            let Some(a) = worst else { break };
            let b = (0..self.k())
                .max_by(|&p, &q| self.kinv.get(p, a).abs().total_cmp(&self.kinv.get(q, a).abs()).then(q.cmp(&p)))
                .expect("kernel nonempty");
            self.shrink(b, a);
            self.refresh();
        }
        self.shift_costs();
    }

    /// Raises working costs of nonbasic structurals whose reduced cost is
    /// negative or near zero. The target is a small positive value that
    /// differs between columns; shifting to exactly zero would leave a fully
    /// dual degenerate basis on which the dual simplex cannot make progress.
    fn shift_costs(&mut self) {
        for j in 0..self.n {
            if self.col_pos[j] != NONE {
                continue;
            }
            let target = PERTURBATION * self.base_cost[j] * (1.0 + spread(j));
            if self.dx[j] < target {
                self.cost[j] += target - self.dx[j];
                self.dx[j] = target;
            }
        }
    }

    pub fn has_shifts(&self) -> bool {
        self.cost.iter().zip(self.base_cost).any(|(c, b)| c != b)
    }

    pub fn remove_shifts(&mut self) {
        self.cost.copy_from_slice(self.base_cost);
        self.refresh_dual();
    }

    pub fn is_primal_feasible(&self) -> bool {
        self.basic_vars().all(|v| self.value(v) >= -PRIMAL_TOL)
    }

    pub fn is_dual_feasible(&self) -> bool {
        (0..self.n).all(|j| self.col_pos[j] != NONE || self.dx[j] >= -self.dual_tol(j))
            && self.kr.iter().all(|&p| self.y[p] >= -DUAL_TOL)
    }

    /// Solves from the current basis to optimality for the true costs.
    pub fn run(&mut self, max_iterations: usize) -> Outcome {
        for _ in 0..8 {
            if !self.is_dual_feasible() {
                if self.is_primal_feasible() {
                    match self.primal_simplex(max_iterations) {
                        Outcome::Optimal => {}
                        other => return other,
                    }
                } else {
                    self.shift_costs();
                }
            }
            match self.dual_simplex(max_iterations) {
                Outcome::Optimal => {}
                other => return other,
            }
            if self.has_shifts() {
                self.remove_shifts();
            }
            self.check_and_refresh();
            if self.is_primal_feasible() && self.is_dual_feasible() {
                return Outcome::Optimal;
            }
        }
        Outcome::Breakdown
    }

    /// Nonbasic variables with (numerically) zero reduced cost: their
    /// presence means the optimum may not be unique.
    pub fn has_dual_degeneracy(&self, rel_tol: f64) -> bool {
        (0..self.n).any(|j| self.col_pos[j] == NONE && self.dx[j] <= rel_tol * (1.0 + self.base_cost[j]))
            || self.kr.iter().any(|&p| {
                let scale = self.a.row(p).iter().map(|&j| self.base_cost[j]).fold(f64::INFINITY, f64::min);
                self.y[p] <= rel_tol * (1.0 + scale)
            })
    }
}

/// Deterministic value in `[0, 1)` per column.
fn spread(j: usize) -> f64 {
    let h = (j as u64 ^ 0x9e37_79b9_7f4a_7c15).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    (h >> 11) as f64 / (1u64 << 53) as f64
}
