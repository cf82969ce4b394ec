//! The box-constrained covering LP `min c'x  s.t.  A x >= 1, 0 <= x <= 1`.
//!
//! [`solve`] runs a kernel-based revised dual simplex and, when the optimum
//! is not unique, an interior point pass restricted to the columns that can
//! carry weight on the optimal face. The returned point is
//! therefore the unique optimal vertex when there is one and a central point
//! of the optimal face otherwise, independent of the pivot path and of any
//! warm start.
//!
//! The upper bound `x <= 1` is never active at an optimum with positive costs
//! (lowering an entry above one keeps every row covered and strictly lowers
//! the objective), so the solver works on `x >= 0` and clamps on output.

mod center;
mod kinv;
mod reference;
mod simplex;

pub use reference::{reference_solve, REFERENCE_MAX_N};

use crate::centrality::CostVector;
use crate::error::{Error, Result};
use crate::graph::{build_coverage_matrix, CoverageMatrix, Graph};
use simplex::{KernelSimplex, Outcome};

/// Relative reduced-cost threshold below which a nonbasic column is treated
/// as tied with the optimum.
const DEGENERACY_TOL: f64 = 1e-9;
const CENTER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub coverage: CoverageMatrix,
    pub cost: CostVector,
}

impl LpProblem {
    pub fn new(coverage: CoverageMatrix, cost: CostVector) -> Result<Self> {
        if coverage.dim() != cost.len() {
            return Err(Error::DimensionMismatch { expected: coverage.dim(), got: cost.len() });
        }
        if let Some((v, c)) = cost.values.iter().enumerate().find(|(_, c)| !(c.is_finite() && **c > 0.0)) {
            return Err(Error::InvalidParameter(format!("cost of node {v} must be positive and finite, got {c}")));
        }
        Ok(Self { coverage, cost })
    }

    pub fn from_graph(g: &Graph, cost: CostVector) -> Result<Self> {
        Self::new(build_coverage_matrix(g), cost)
    }

    pub fn dim(&self) -> usize {
        self.coverage.dim()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.cost.values.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// `max_u (1 - (A x)_u)_+`.
    pub fn max_infeasibility(&self, x: &[f64]) -> f64 {
        self.coverage.mul_vec(x).iter().map(|ax| (1.0 - ax).max(0.0)).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub feas_tol: f64,
    /// Relative gap between the primal and dual objectives.
    pub opt_tol: f64,
    pub max_iterations: usize,
    /// Previous primal point; projected onto `[0, 1]^n` before use.
    pub warm_start: Option<Vec<f64>>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { feas_tol: 1e-6, opt_tol: 1e-6, max_iterations: 10_000, warm_start: None }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.feas_tol > 0.0 && self.opt_tol > 0.0) {
            return Err(Error::InvalidParameter("solver tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn with_warm_start(&self, x: Vec<f64>) -> Self {
        Self { warm_start: Some(x), ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    pub max_infeasibility: f64,
}

impl FractionalSolution {
    pub(crate) fn evaluate(problem: &LpProblem, mut x: Vec<f64>, iterations: usize, converged: bool) -> Self {
        for v in &mut x {
            *v = v.clamp(0.0, 1.0);
        }
        Self {
            objective: problem.objective(&x),
            max_infeasibility: problem.max_infeasibility(&x),
            x,
            iterations,
            converged,
        }
    }
}

pub fn solve(problem: &LpProblem, config: &SolverConfig) -> Result<FractionalSolution> {
    config.validate()?;
    let n = problem.dim();
    let cost = &problem.cost.values;
    let mut engine = KernelSimplex::new(&problem.coverage, cost);
    if let Some(ws) = &config.warm_start {
        if ws.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: ws.len() });
        }
        let projected: Vec<f64> = ws.iter().map(|v| if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) }).collect();
        engine.crash(&projected);
    }

    match engine.run(config.max_iterations) {
        Outcome::Optimal => {}
        Outcome::IterationLimit | Outcome::Breakdown => {
            let best = FractionalSolution::evaluate(problem, engine.primal().to_vec(), engine.iterations, false);
            return Err(Error::IterationLimit { best: Box::new(best) });
        }
    }

    let vertex = engine.primal().to_vec();
    let dual_objective: f64 = (0..n).filter(|&u| engine.is_tight_row(u)).map(|u| engine.duals()[u].max(0.0)).sum();
    let mut x = vertex;
    let mut iterations = engine.iterations;

    if engine.has_dual_degeneracy(DEGENERACY_TOL) {
        let d = engine.reduced_costs();
        let cols: Vec<usize> = (0..n)
            .filter(|&j| engine.is_basic_x(j) || d[j] <= DEGENERACY_TOL * (1.0 + cost[j]))
            .collect();
        if let Some(res) = center::interior_point(&problem.coverage, cost, &cols, CENTER_TOL) {
            let vertex_obj = problem.objective(&x);
            let center_obj = problem.objective(&res.x);
            let agree = (center_obj - vertex_obj).abs() <= 1e-8 * (1.0 + vertex_obj.abs());
            if agree && problem.max_infeasibility(&res.x) <= 1e-8 {
                x = res.x;
                iterations += res.iterations;
            }
        }
    }

    let mut sol = FractionalSolution::evaluate(problem, x, iterations, true);
    let gap = (sol.objective - dual_objective).abs() / (1.0 + sol.objective.abs());
    sol.converged = sol.max_infeasibility <= config.feas_tol && gap <= config.opt_tol;
    if !sol.converged {
        return Err(Error::IterationLimit { best: Box::new(sol) });
    }
    Ok(sol)
}
