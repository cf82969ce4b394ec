//! Incremental node additions with warm-started re-solving.
//!
//! Every step recomputes betweenness and costs on the grown graph, pads the
//! previous fractional solution with zeros for the new nodes and hands it to
//! the solver as a starting point.

use std::io::Write;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::centrality::{betweenness, cost_vector, CostParams, CostVector};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lp::{solve, LpProblem, SolverConfig};
use crate::select::{round, NexusSet, SelectionParams};

/// How a new node picks its `m` neighbours among the existing nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attachment {
    UniformAttach(usize),
    /// Probability proportional to current degree.
    PreferentialAttach(usize),
}

impl Default for Attachment {
    fn default() -> Self {
        Attachment::PreferentialAttach(2)
    }
}

impl Attachment {
    fn m(self) -> usize {
        match self {
            Attachment::UniformAttach(m) | Attachment::PreferentialAttach(m) => m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthSchedule {
    /// Nodes added at each step.
    pub steps: Vec<usize>,
    pub attachment: Attachment,
    pub seed: u64,
}

impl GrowthSchedule {
    /// `steps` single-node additions.
    pub fn single_nodes(steps: usize, attachment: Attachment, seed: u64) -> Self {
        Self { steps: vec![1; steps], attachment, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps.contains(&0) {
            return Err(Error::InvalidParameter("every growth step must add at least one node".into()));
        }
        if self.attachment.m() == 0 {
            return Err(Error::InvalidParameter("new nodes need at least one edge".into()));
        }
        Ok(())
    }
}

/// Adds one node wired to `min(m, n)` distinct existing nodes.
pub fn attach_node(g: &mut Graph, attachment: Attachment, rng: &mut ChaCha8Rng) -> Result<usize> {
    let n = g.node_count();
    let m = attachment.m().min(n);
    let targets: Vec<usize> = match attachment {
        Attachment::UniformAttach(_) => rand::seq::index::sample(rng, n, m).into_vec(),
        Attachment::PreferentialAttach(_) => {
            // endpoint pool: node v appears deg(v) times (once if isolated)
            let pool: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, g.neighbors(v).len().max(1))).collect();
            let mut picked = Vec::with_capacity(m);
            while picked.len() < m {
                let v = *pool.choose(rng).expect("graph is nonempty");
                if !picked.contains(&v) {
                    picked.push(v);
                }
            }
            picked
        }
    };
    let v = g.add_node();
    for t in targets {
        g.add_edge(v, t)?;
    }
    Ok(v)
}

/// Copies `x_prev` and appends zeros up to `n_new` entries.
pub fn pad_warm_start(x_prev: &[f64], n_new: usize) -> Result<Vec<f64>> {
    if n_new < x_prev.len() {
        return Err(Error::ShrinkNotSupported { old: x_prev.len(), new: n_new });
    }
    let mut x = x_prev.to_vec();
    x.resize(n_new, 0.0);
    Ok(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub t: usize,
    pub n: usize,
    pub selected: Vec<usize>,
    /// Wall-clock time of the LP solve alone.
    pub solve_ms: f64,
    pub warm: bool,
    pub objective: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DynamicTrace {
    pub records: Vec<StepRecord>,
}

pub const TRACE_HEADER: &str = "t,n,selected_count,selected_ids,solve_ms,warm,objective,feasible";

impl StepRecord {
    pub fn csv_fields(&self) -> Vec<String> {
        vec![
            self.t.to_string(),
            self.n.to_string(),
            self.selected.len().to_string(),
            join_ids(&self.selected),
            self.solve_ms.to_string(),
            self.warm.to_string(),
            format!("{:e}", self.objective),
            self.feasible.to_string(),
        ]
    }
}

pub fn join_ids(ids: &[usize]) -> String {
    ids.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

impl DynamicTrace {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(TRACE_HEADER.split(','))?;
        for r in &self.records {
            w.write_record(r.csv_fields())?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs the growth schedule from `g0`, warm-starting every step after the
/// first from the previous fractional solution.
pub fn run_dynamic(
    g0: &Graph,
    schedule: &GrowthSchedule,
    params: &SelectionParams,
    cost_params: &CostParams,
    solver_config: &SolverConfig,
) -> Result<DynamicTrace> {
    run_dynamic_with(g0, schedule, params, cost_params, solver_config, true).map(|(trace, _)| trace)
}

/// As [`run_dynamic`], optionally solving every step cold. Also returns the
/// final graph. The graph sequence depends only on `g0` and the schedule, so
/// warm and cold runs see identical instances.
pub fn run_dynamic_with(
    g0: &Graph,
    schedule: &GrowthSchedule,
    params: &SelectionParams,
    cost_params: &CostParams,
    solver_config: &SolverConfig,
    warm: bool,
) -> Result<(DynamicTrace, Graph)> {
    let costs = |g: &Graph| cost_vector(g, &betweenness(g), cost_params);
    run_dynamic_costed(g0, schedule, params, costs, solver_config, warm)
}

/// The graphs seen by a dynamic run: `g0` followed by the state after each
/// growth step.
pub fn growth_sequence(g0: &Graph, schedule: &GrowthSchedule) -> Result<Vec<Graph>> {
    schedule.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(schedule.seed);
    let mut g = g0.clone();
    let mut out = vec![g.clone()];
    for &k in &schedule.steps {
        for _ in 0..k {
            attach_node(&mut g, schedule.attachment, &mut rng)?;
        }
        out.push(g.clone());
    }
    Ok(out)
}

/// Dynamic run with costs recomputed by `costs` on every grown graph.
pub fn run_dynamic_costed(
    g0: &Graph,
    schedule: &GrowthSchedule,
    params: &SelectionParams,
    costs: impl Fn(&Graph) -> Result<CostVector>,
    solver_config: &SolverConfig,
    warm: bool,
) -> Result<(DynamicTrace, Graph)> {
    schedule.validate()?;
    params.validate()?;
    if !g0.is_connected() {
        return Err(Error::InvalidGraph("initial graph must be connected".into()));
    }
    let graphs = growth_sequence(g0, schedule)?;
    let mut trace = DynamicTrace::default();
    let mut x_prev: Option<Vec<f64>> = None;

    for (t, g) in graphs.iter().enumerate() {
        let n = g.node_count();
        if n == 1 {
            trace.records.push(StepRecord { t, n, selected: vec![0], solve_ms: 0.0, warm: false, objective: 0.0, feasible: true });
            continue;
        }
        let cost = costs(g)?;
        let problem = LpProblem::from_graph(g, cost.clone())?;
        let use_warm = warm && x_prev.is_some();
        let config = match (&x_prev, use_warm) {
            (Some(x), true) => solver_config.with_warm_start(pad_warm_start(x, n)?),
            _ => SolverConfig { warm_start: None, ..solver_config.clone() },
        };
        let started = Instant::now();
        let sol = solve(&problem, &config)?;
        let solve_ms = started.elapsed().as_secs_f64() * 1e3;
        let set: NexusSet = round(g, &sol, &cost, params);
        if !set.feasible {
            return Err(Error::InvalidGraph(format!("step {t} produced an infeasible cover")));
        }
        trace.records.push(StepRecord {
            t,
            n,
            selected: set.selected,
            solve_ms,
            warm: use_warm,
            objective: sol.objective,
            feasible: set.feasible,
        });
        x_prev = Some(sol.x);
    }
    let last = graphs.into_iter().last().expect("sequence holds g0");
    Ok((trace, last))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, Family, GeneratorSpec};
    use crate::select::select_static;

    fn defaults() -> (SelectionParams, CostParams, SolverConfig) {
        (SelectionParams::default(), CostParams::default(), SolverConfig::default())
    }

    #[test]
    fn pad_examples() {
        assert_eq!(pad_warm_start(&[0.2, 1.0], 3).unwrap(), vec![0.2, 1.0, 0.0]);
        assert_eq!(pad_warm_start(&[0.5, 0.5], 2).unwrap(), vec![0.5, 0.5]);
        assert_eq!(pad_warm_start(&[], 2).unwrap(), vec![0.0, 0.0]);
        assert!(matches!(pad_warm_start(&[1.0, 0.0], 1), Err(Error::ShrinkNotSupported { old: 2, new: 1 })));
    }

    #[test]
    fn three_single_steps_from_ten() {
        let g0 = generate(&GeneratorSpec::new(Family::BarabasiAlbert, 10, 3)).unwrap();
        let (p, c, s) = defaults();
        let trace = run_dynamic(&g0, &GrowthSchedule::single_nodes(3, Attachment::default(), 1), &p, &c, &s).unwrap();
        let ns: Vec<usize> = trace.records.iter().map(|r| r.n).collect();
        assert_eq!(ns, vec![10, 11, 12, 13]);
        assert!(trace.records.iter().all(|r| r.feasible));
        assert!(!trace.records[0].warm && trace.records[1..].iter().all(|r| r.warm));
    }

    #[test]
    fn empty_schedule_matches_static() {
        let g0 = generate(&GeneratorSpec::new(Family::ErdosRenyi, 25, 8)).unwrap();
        let (p, c, s) = defaults();
        let trace = run_dynamic(&g0, &GrowthSchedule::single_nodes(0, Attachment::default(), 0), &p, &c, &s).unwrap();
        assert_eq!(trace.records.len(), 1);
        let (set, sol) = select_static(&g0, &p, &c, &s).unwrap();
        assert_eq!(trace.records[0].selected, set.selected);
        assert_eq!(trace.records[0].objective, sol.objective);
    }

    #[test]
    fn deterministic_and_warm_matches_cold() {
        let g0 = generate(&GeneratorSpec::new(Family::InternetAs, 40, 2)).unwrap();
        let sched = GrowthSchedule { steps: vec![1, 2, 3], attachment: Attachment::UniformAttach(1), seed: 9 };
        let (p, c, s) = defaults();
        let a = run_dynamic(&g0, &sched, &p, &c, &s).unwrap();
        let b = run_dynamic(&g0, &sched, &p, &c, &s).unwrap();
        let sel = |t: &DynamicTrace| t.records.iter().map(|r| r.selected.clone()).collect::<Vec<_>>();
        assert_eq!(sel(&a), sel(&b));
        let (cold, g) = run_dynamic_with(&g0, &sched, &p, &c, &s, false).unwrap();
        assert_eq!(g.node_count(), 46);
        for (w, c) in a.records.iter().zip(&cold.records) {
            assert_eq!(w.n, c.n);
            assert!((w.objective - c.objective).abs() <= 1e-5 * c.objective.abs());
        }
    }

    #[test]
    fn trace_csv_shape() {
        let g0 = Graph::path(5).unwrap();
        let (p, c, s) = defaults();
        let trace = run_dynamic(&g0, &GrowthSchedule::single_nodes(1, Attachment::default(), 0), &p, &c, &s).unwrap();
        let mut buf = Vec::new();
        trace.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], TRACE_HEADER);
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0,5,"));
    }

    #[test]
    fn rejects_bad_schedules() {
        let g0 = Graph::path(4).unwrap();
        let (p, c, s) = defaults();
        let zero_step = GrowthSchedule { steps: vec![1, 0], attachment: Attachment::default(), seed: 0 };
        assert!(run_dynamic(&g0, &zero_step, &p, &c, &s).is_err());
        let no_edges = GrowthSchedule { steps: vec![1], attachment: Attachment::UniformAttach(0), seed: 0 };
        assert!(run_dynamic(&g0, &no_edges, &p, &c, &s).is_err());
        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(run_dynamic(&split, &GrowthSchedule::single_nodes(1, Attachment::default(), 0), &p, &c, &s).is_err());
    }
}
