//! Turning a fractional LP solution into a covering node set.
//!
//! Thresholding alone can return an incomplete cover (odd cycles threshold to
//! the empty set), so every selection goes through a repair step and is
//! verified before it is returned.

use crate::centrality::{betweenness, cost_vector, CostParams, CostVector};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lp::{solve, FractionalSolution, LpProblem, SolverConfig};

/// Largest instance [`exact_solver`] accepts.
pub const EXACT_MAX_N: usize = 20;

/// Slack allowed on the `x >= 1/f` test in frequency rounding.
const FREQUENCY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RepairPolicy {
    #[default]
    GreedyRepair,
    FrequencyRound,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionParams {
    pub delta: f64,
    pub repair: RepairPolicy,
}

impl Default for SelectionParams {
    fn default() -> Self {
        Self { delta: 0.5, repair: RepairPolicy::GreedyRepair }
    }
}

impl SelectionParams {
    pub fn validate(&self) -> Result<()> {
        if self.delta > 0.0 && self.delta < 1.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {}", self.delta)))
        }
    }
}

/// A selected node set with its cost and a feasibility certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct NexusSet {
    /// Sorted node ids.
    pub selected: Vec<usize>,
    pub total_cost: f64,
    pub feasible: bool,
}

impl NexusSet {
    /// Sorts and deduplicates `ids`, sums their cost in id order and checks
    /// coverage.
    pub fn new(g: &Graph, mut ids: Vec<usize>, cost: &CostVector) -> Self {
        ids.sort_unstable();
        ids.dedup();
        let total_cost = cost.total(&ids);
        let feasible = verify_cover(g, &ids);
        Self { selected: ids, total_cost, feasible }
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.selected.binary_search(&v).is_ok()
    }
}

/// Indices with `x_i > delta`, strictly.
pub fn threshold(x: &FractionalSolution, delta: f64) -> Vec<usize> {
    x.x.iter().enumerate().filter(|(_, &v)| v > delta).map(|(i, _)| i).collect()
}

/// True iff every node is in `s` or adjacent to a node of `s`. Out-of-range
/// ids are ignored.
pub fn verify_cover(g: &Graph, s: &[usize]) -> bool {
    let n = g.node_count();
    let mut covered = vec![false; n];
    for &v in s.iter().filter(|&&v| v < n) {
        covered[v] = true;
        for &w in g.neighbors(v) {
            covered[w] = true;
        }
    }
    covered.into_iter().all(|c| c)
}

/// Extends `start` greedily by the best newly-covered/cost ratio until the
/// graph is covered. Returns only the added nodes, in the order chosen.
/// Equal ratios go to the lowest id.
pub(crate) fn greedy_extend(g: &Graph, cost: &CostVector, start: &[usize]) -> Vec<usize> {
    let n = g.node_count();
    let mut covered = vec![false; n];
    let mut chosen = vec![false; n];
    let mut remaining = n;
    let mark = |v: usize, covered: &mut Vec<bool>, remaining: &mut usize| {
        if !covered[v] {
            covered[v] = true;
            *remaining -= 1;
        }
    };
    for &v in start {
        chosen[v] = true;
        mark(v, &mut covered, &mut remaining);
        for &w in g.neighbors(v) {
            mark(w, &mut covered, &mut remaining);
        }
    }
    let mut added = Vec::new();
    while remaining > 0 {
        let mut best: Option<(usize, f64)> = None;
        for v in (0..n).filter(|&v| !chosen[v]) {
            let gain = usize::from(!covered[v]) + g.neighbors(v).iter().filter(|&&w| !covered[w]).count();
            if gain == 0 {
                continue;
            }
            let ratio = gain as f64 / cost.values[v];
            if best.is_none_or(|(_, r)| ratio > r) {
                best = Some((v, ratio));
            }
        }
        // some uncovered node exists, and it can always cover itself
        let (v, _) = best.expect("an uncovered node can cover itself");
        chosen[v] = true;
        added.push(v);
        mark(v, &mut covered, &mut remaining);
        for &w in g.neighbors(v) {
            mark(w, &mut covered, &mut remaining);
        }
    }
    added
}

/// Smallest feasible superset of `partial` reachable by greedy additions.
/// A feasible `partial` is returned unchanged (sorted).
pub fn greedy_repair(g: &Graph, partial: &[usize], cost: &CostVector) -> Vec<usize> {
    let mut out = partial.to_vec();
    out.extend(greedy_extend(g, cost, partial));
    out.sort_unstable();
    out.dedup();
    out
}

/// `{ i : x_i >= 1/f }` with `f = max_u (deg(u) + 1)`, the largest number of
/// variables in any covering row. Feasible whenever `A x >= 1`.
pub fn frequency_round(g: &Graph, x: &[f64]) -> Vec<usize> {
    let f = (0..g.node_count()).map(|v| g.neighbors(v).len() + 1).max().unwrap_or(1) as f64;
    let cut = 1.0 / f - FREQUENCY_TOL;
    x.iter().enumerate().filter(|(_, &v)| v >= cut).map(|(i, _)| i).collect()
}

/// Repairs `partial` into a cover under `policy`. `x` is the fractional
/// solution the partial set came from; frequency rounding needs it.
pub fn repair(g: &Graph, partial: &[usize], cost: &CostVector, policy: RepairPolicy, x: &[f64]) -> Vec<usize> {
    match policy {
        RepairPolicy::GreedyRepair => greedy_repair(g, partial, cost),
        RepairPolicy::FrequencyRound => {
            let mut s = partial.to_vec();
            s.extend(frequency_round(g, x));
            s.sort_unstable();
            s.dedup();
            // only reachable if the LP point violates coverage beyond tolerance
            if !verify_cover(g, &s) {
                s = greedy_repair(g, &s, cost);
            }
            s
        }
    }
}

/// Threshold and repair a solved fractional point.
pub fn round(g: &Graph, sol: &FractionalSolution, cost: &CostVector, params: &SelectionParams) -> NexusSet {
    let partial = threshold(sol, params.delta);
    let s = repair(g, &partial, cost, params.repair, &sol.x);
    NexusSet::new(g, s, cost)
}

/// LP selection with an arbitrary positive cost vector.
pub fn select_with_cost(
    g: &Graph,
    cost: &CostVector,
    params: &SelectionParams,
    solver_config: &SolverConfig,
) -> Result<(NexusSet, FractionalSolution)> {
    params.validate()?;
    let problem = LpProblem::from_graph(g, cost.clone())?;
    let sol = solve(&problem, solver_config)?;
    let set = round(g, &sol, cost, params);
    debug_assert!(set.feasible);
    Ok((set, sol))
}

/// The full static pipeline: betweenness, costs, LP, threshold, repair.
///
/// A single node has no defined cost; it is returned as `{0}` with zero cost
/// and no solve.
pub fn select_static(
    g: &Graph,
    params: &SelectionParams,
    cost_params: &CostParams,
    solver_config: &SolverConfig,
) -> Result<(NexusSet, FractionalSolution)> {
    params.validate()?;
    if g.node_count() == 1 {
        let sol = FractionalSolution { x: vec![1.0], objective: 0.0, iterations: 0, converged: true, max_infeasibility: 0.0 };
        return Ok((NexusSet { selected: vec![0], total_cost: 0.0, feasible: true }, sol));
    }
    let cost = cost_vector(g, &betweenness(g), cost_params)?;
    select_with_cost(g, &cost, params, solver_config)
}

/// Minimum-cost cover by branch and bound, for `n <= EXACT_MAX_N`.
///
/// Branches on the lowest uncovered node: one of its closed neighbourhood
/// must be selected. Costs are summed in id order; totals within a relative
/// 1e-12 count as equal and the lexicographically smaller sorted id list
/// wins.
pub fn exact_solver(g: &Graph, cost: &CostVector) -> Result<NexusSet> {
    let n = g.node_count();
    if n > EXACT_MAX_N {
        return Err(Error::SizeLimit { n, max: EXACT_MAX_N });
    }
    if cost.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: cost.len() });
    }
    let closed: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(1u32 << v, |m, &w| m | (1 << w)))
        .collect();
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut search = Exact { closed: &closed, cost: &cost.values, full, best: None };
    search.branch(0, 0);
    let (mask, _) = search.best.expect("the full vertex set is a cover");
    let ids: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
    Ok(NexusSet::new(g, ids, cost))
}

struct Exact<'a> {
    closed: &'a [u32],
    cost: &'a [f64],
    full: u32,
    best: Option<(u32, f64)>,
}

impl Exact<'_> {
    fn total(&self, mask: u32) -> f64 {
        (0..self.cost.len()).filter(|&v| mask >> v & 1 == 1).map(|v| self.cost[v]).sum()
    }

    fn branch(&mut self, chosen: u32, covered: u32) {
        let partial = self.total(chosen);
        if let Some((_, b)) = self.best {
            if partial > b * (1.0 + 1e-12) {
                return;
            }
        }
        if covered == self.full {
            self.offer(chosen, partial);
            return;
        }
        let u = (!covered & self.full).trailing_zeros() as usize;
        let mut options = self.closed[u];
        while options != 0 {
            let v = options.trailing_zeros() as usize;
            options &= options - 1;
            self.branch(chosen | 1 << v, covered | self.closed[v]);
        }
    }

    fn offer(&mut self, mask: u32, total: f64) {
        let better = match self.best {
            None => true,
            Some((m, b)) => {
                let tol = 1e-12 * b.abs().max(total.abs());
                if total < b - tol {
                    true
                } else if total <= b + tol {
                    lex_less(mask, m)
                } else {
                    false
                }
            }
        };
        if better {
            self.best = Some((mask, total));
        }
    }
}

/// Lexicographic order on the sorted id lists of two masks.
fn lex_less(a: u32, b: u32) -> bool {
    let (mut a, mut b) = (a, b);
    loop {
        match (a, b) {
            (0, 0) => return false,
            (0, _) => return true,
            (_, 0) => return false,
            _ => {
                let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
                if x != y {
                    return x < y;
                }
                a &= a - 1;
                b &= b - 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::degree_cost_vector;

    fn eq5(g: &Graph) -> CostVector {
        cost_vector(g, &betweenness(g), &CostParams::default()).unwrap()
    }

    fn sol(x: Vec<f64>) -> FractionalSolution {
        FractionalSolution { x, objective: 0.0, iterations: 0, converged: true, max_infeasibility: 0.0 }
    }

    #[test]
    fn threshold_is_strict() {
        assert_eq!(threshold(&sol(vec![1.0, 0.0, 0.0, 0.0]), 0.5), vec![0]);
        assert!(threshold(&sol(vec![0.5, 0.5]), 0.5).is_empty());
        assert!(threshold(&sol(vec![1.0 / 3.0; 5]), 0.5).is_empty());
    }

    #[test]
    fn verify_cover_cases() {
        let g = Graph::star(4).unwrap();
        assert!(verify_cover(&g, &[0]));
        assert!(!verify_cover(&g, &[1]));
        assert!(verify_cover(&g, &[0, 1, 2, 3]));
        assert!(!verify_cover(&g, &[]));
    }

    #[test]
    fn star_static_selects_center() {
        let g = Graph::star(4).unwrap();
        let (s, _) = select_static(&g, &SelectionParams::default(), &CostParams::default(), &SolverConfig::default()).unwrap();
        assert_eq!(s.selected, vec![0]);
        assert!(s.feasible);
        assert!((s.total_cost - 0.0801497).abs() < 1e-7);
        assert_eq!(exact_solver(&g, &eq5(&g)).unwrap().selected, vec![0]);
    }

    #[test]
    fn five_cycle_needs_repair() {
        let g = Graph::cycle(5).unwrap();
        let (s, x) = select_static(&g, &SelectionParams::default(), &CostParams::default(), &SolverConfig::default()).unwrap();
        assert!(threshold(&x, 0.5).is_empty());
        assert_eq!(s.len(), 2);
        assert!(s.feasible);
    }

    #[test]
    fn single_node_skips_solve() {
        let g = Graph::new(1).unwrap();
        let (s, x) = select_static(&g, &SelectionParams::default(), &CostParams::default(), &SolverConfig::default()).unwrap();
        assert_eq!(s.selected, vec![0]);
        assert_eq!(x.iterations, 0);
    }

    #[test]
    fn repair_fixpoint_and_star() {
        let g = Graph::star(4).unwrap();
        let c = eq5(&g);
        assert_eq!(greedy_repair(&g, &[], &c), vec![0]);
        assert_eq!(greedy_repair(&g, &[2, 1, 3], &c), vec![1, 2, 3]);
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(greedy_repair(&c5, &[], &CostVector::uniform(5, 1.0)).len(), 2);
    }

    #[test]
    fn frequency_round_on_fractional_cycle() {
        // f = 3 on a cycle, so x = 1/3 keeps every node
        let g = Graph::cycle(7).unwrap();
        assert_eq!(frequency_round(&g, &[1.0 / 3.0; 7]).len(), 7);
        let params = SelectionParams { repair: RepairPolicy::FrequencyRound, ..SelectionParams::default() };
        let (s, _) = select_static(&g, &params, &CostParams::default(), &SolverConfig::default()).unwrap();
        assert!(s.feasible);
    }

    #[test]
    fn rejects_bad_delta() {
        let g = Graph::path(3).unwrap();
        for delta in [0.0, 1.0, -0.2, f64::NAN] {
            let params = SelectionParams { delta, ..SelectionParams::default() };
            assert!(select_static(&g, &params, &CostParams::default(), &SolverConfig::default()).is_err());
        }
    }

    #[test]
    fn exact_small_cases() {
        let k5 = Graph::complete(5).unwrap();
        let s = exact_solver(&k5, &CostVector::uniform(5, 2.0)).unwrap();
        assert_eq!(s.selected, vec![0]);
        assert_eq!(s.total_cost, 2.0);

        // P4 has four optimal pairs; {0,2} is the lexicographically first
        let p4 = Graph::path(4).unwrap();
        let s = exact_solver(&p4, &CostVector::uniform(4, 1.0)).unwrap();
        assert_eq!(s.selected, vec![0, 2]);

        let big = Graph::path(21).unwrap();
        assert!(matches!(exact_solver(&big, &CostVector::uniform(21, 1.0)), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn exact_matches_enumeration() {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 5), (0, 3)]).unwrap();
        let c = degree_cost_vector(&g).unwrap();
        let s = exact_solver(&g, &c).unwrap();
        let mut best = f64::INFINITY;
        for mask in 0u32..1 << 7 {
            let ids: Vec<usize> = (0..7).filter(|&v| mask >> v & 1 == 1).collect();
            if verify_cover(&g, &ids) {
                best = best.min(c.total(&ids));
            }
        }
        assert!((s.total_cost - best).abs() < 1e-12);
    }

    #[test]
    fn lex_order() {
        assert!(lex_less(0b0101, 0b0110)); // {0,2} < {1,2}
        assert!(lex_less(0b0001, 0b0011)); // prefix first
        assert!(!lex_less(0b0110, 0b0110));
    }
}
