//! Comparison methods: greedy weighted set cover and a genetic algorithm.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::centrality::{betweenness, cost_vector, degree_cost_vector, CostParams, CostVector};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::select::{greedy_extend, greedy_repair, NexusSet};

/// Which per-node cost a method minimises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CostProfile {
    /// `1 / deg^2`
    Degree,
    /// `1 / (deg^2 ln(1 + C_B + eps))`
    Centrality,
}

impl CostProfile {
    pub fn as_str(self) -> &'static str {
        match self {
            CostProfile::Degree => "degree",
            CostProfile::Centrality => "centrality",
        }
    }

    pub fn costs(self, g: &Graph, params: &CostParams) -> Result<CostVector> {
        match self {
            CostProfile::Degree => degree_cost_vector(g),
            CostProfile::Centrality => cost_vector(g, &betweenness(g), params),
        }
    }
}

impl fmt::Display for CostProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CostProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "degree" => Ok(CostProfile::Degree),
            "centrality" => Ok(CostProfile::Centrality),
            other => Err(Error::InvalidParameter(format!("unknown cost profile `{other}`"))),
        }
    }
}

/// Greedy selection order: each step takes the node with the most newly
/// covered nodes per unit cost, lowest id on ties.
pub fn greedy_order(g: &Graph, cost: &CostVector) -> Vec<usize> {
    greedy_extend(g, cost, &[])
}

pub fn greedy_cover(g: &Graph, cost: &CostVector) -> NexusSet {
    NexusSet::new(g, greedy_order(g, cost), cost)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    pub tournament_size: usize,
    pub crossover_rate: f64,
    /// Per-bit flip probability; `None` means `1/n`.
    pub mutation_rate: Option<f64>,
    pub elitism: usize,
    /// Fitness penalty per uncovered node; `None` means `n * max_v c_v`.
    pub infeasibility_penalty: Option<f64>,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population: 50,
            generations: 100,
            tournament_size: 3,
            crossover_rate: 0.9,
            mutation_rate: None,
            elitism: 2,
            infeasibility_penalty: None,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let rate_ok = |r: f64| (0.0..=1.0).contains(&r);
        if self.population < 2 {
            return Err(Error::InvalidParameter("GA population must be at least 2".into()));
        }
        if self.tournament_size == 0 {
            return Err(Error::InvalidParameter("tournament size must be positive".into()));
        }
        if self.elitism > self.population {
            return Err(Error::InvalidParameter("elitism exceeds population".into()));
        }
        if !rate_ok(self.crossover_rate) || !self.mutation_rate.is_none_or(rate_ok) {
            return Err(Error::InvalidParameter("GA rates must lie in [0, 1]".into()));
        }
        if let Some(p) = self.infeasibility_penalty {
            if !(p >= 0.0 && p.is_finite()) {
                return Err(Error::InvalidParameter(format!("penalty must be nonnegative, got {p}")));
            }
        }
        Ok(())
    }
}

struct Evaluator<'a> {
    g: &'a Graph,
    cost: &'a [f64],
    penalty: f64,
    covered: Vec<bool>,
}

impl Evaluator<'_> {
    fn fitness(&mut self, genes: &[bool]) -> f64 {
        self.covered.fill(false);
        let mut total = 0.0;
        for (v, _) in genes.iter().enumerate().filter(|(_, &on)| on) {
            total += self.cost[v];
            self.covered[v] = true;
            for &w in self.g.neighbors(v) {
                self.covered[w] = true;
            }
        }
        let uncovered = self.covered.iter().filter(|&&c| !c).count();
        total + self.penalty * uncovered as f64
    }
}

/// Binary GA over selection vectors, minimising cost plus a penalty per
/// uncovered node. The best individual found is greedily repaired into a
/// cover before it is returned.
///
/// All randomness is drawn from one ChaCha8 stream in a fixed order, so a
/// seed determines the whole run.
pub fn ga_cover(g: &Graph, cost: &CostVector, config: &GaConfig) -> Result<NexusSet> {
    config.validate()?;
    let n = g.node_count();
    if cost.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: cost.len() });
    }
    let max_c = cost.values.iter().copied().fold(0.0, f64::max);
    let mut eval = Evaluator {
        g,
        cost: &cost.values,
        penalty: config.infeasibility_penalty.unwrap_or(n as f64 * max_c),
        covered: vec![false; n],
    };
    let mutation = config.mutation_rate.unwrap_or(1.0 / n as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut pop: Vec<Vec<bool>> = (0..config.population).map(|_| (0..n).map(|_| rng.gen_bool(0.5)).collect()).collect();
    let mut fit: Vec<f64> = pop.iter().map(|c| eval.fitness(c)).collect();
    let (mut best, mut best_fit) = fittest(&pop, &fit);

    for _ in 0..config.generations {
        let mut order: Vec<usize> = (0..pop.len()).collect();
        order.sort_by(|&a, &b| fit[a].total_cmp(&fit[b]).then(a.cmp(&b)));
        let mut next: Vec<Vec<bool>> = order.iter().take(config.elitism).map(|&i| pop[i].clone()).collect();
        while next.len() < config.population {
            let a = tournament(&fit, config.tournament_size, &mut rng);
            let b = tournament(&fit, config.tournament_size, &mut rng);
            let mut child = if rng.gen_bool(config.crossover_rate) {
                pop[a].iter().zip(&pop[b]).map(|(&x, &y)| if rng.gen_bool(0.5) { x } else { y }).collect()
            } else {
                pop[a].clone()
            };
            for bit in child.iter_mut() {
                if rng.gen_bool(mutation) {
                    *bit = !*bit;
                }
            }
            next.push(child);
        }
        pop = next;
        fit = pop.iter().map(|c| eval.fitness(c)).collect();
        let (cand, cand_fit) = fittest(&pop, &fit);
        if cand_fit < best_fit {
            best = cand;
            best_fit = cand_fit;
        }
    }

    let partial: Vec<usize> = best.iter().enumerate().filter(|(_, &on)| on).map(|(v, _)| v).collect();
    Ok(NexusSet::new(g, greedy_repair(g, &partial, cost), cost))
}

fn fittest(pop: &[Vec<bool>], fit: &[f64]) -> (Vec<bool>, f64) {
    let i = (0..pop.len()).min_by(|&a, &b| fit[a].total_cmp(&fit[b]).then(a.cmp(&b))).expect("nonempty population");
    (pop[i].clone(), fit[i])
}

fn tournament(fit: &[f64], size: usize, rng: &mut ChaCha8Rng) -> usize {
    let mut winner = rng.gen_range(0..fit.len());
    for _ in 1..size {
        let c = rng.gen_range(0..fit.len());
        if fit[c] < fit[winner] || (fit[c] == fit[winner] && c < winner) {
            winner = c;
        }
    }
    winner
}
