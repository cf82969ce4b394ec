//! Seeded random graph families: uniform random trees, Erdős–Rényi,
//! Barabási–Albert and a simplified tiered Internet AS-level model.
//!
//! Every generator returns a connected graph and is fully determined by its
//! [`GeneratorSpec`], seed included.

use std::collections::BinaryHeap;
use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Rejection budget for disconnected Erdős–Rényi draws.
pub const ER_MAX_ATTEMPTS: usize = 1000;

/// Tier fractions (core, transit, stub) of the Internet-like model.
pub const AS_TIER_FRACTIONS: [f64; 3] = [0.05, 0.25, 0.70];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Tree,
    ErdosRenyi,
    BarabasiAlbert,
    InternetAs,
}

impl Family {
    pub const ALL: [Family; 4] =
        [Family::Tree, Family::ErdosRenyi, Family::BarabasiAlbert, Family::InternetAs];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Tree => "tree",
            Family::ErdosRenyi => "erdos-renyi",
            Family::BarabasiAlbert => "barabasi-albert",
            Family::InternetAs => "internet-as",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "tree" => Ok(Family::Tree),
            "er" | "erdos-renyi" => Ok(Family::ErdosRenyi),
            "ba" | "barabasi-albert" => Ok(Family::BarabasiAlbert),
            "as" | "internet" | "internet-as" => Ok(Family::InternetAs),
            other => Err(Error::InvalidSpec(format!("unknown graph family `{other}`"))),
        }
    }
}

/// Default ER edge probability: twice the connectivity threshold.
pub fn default_er_probability(n: usize) -> f64 {
    if n < 2 {
        return 1.0;
    }
    let n = n as f64;
    (2.0 * n.ln() / n).min(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    /// Edge probability, Erdős–Rényi only.
    pub p: f64,
    /// Edges per arriving node, Barabási–Albert only.
    pub m: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    /// Spec with the default parameters for `family`: `p = 2 ln(n)/n` and `m = 2`
    /// (clamped to `n - 1`).
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self { family, n, p: default_er_probability(n), m: 2.min(n.saturating_sub(1)).max(1), seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidSpec("n must be at least 1".into()));
        }
        match self.family {
            Family::ErdosRenyi if !(self.p > 0.0 && self.p <= 1.0) => {
                Err(Error::InvalidSpec(format!("p must lie in (0, 1], got {}", self.p)))
            }
            Family::BarabasiAlbert if self.n > 1 && (self.m == 0 || self.m >= self.n) => {
                Err(Error::InvalidSpec(format!("m must satisfy 1 <= m < n, got m={} n={}", self.m, self.n)))
            }
            _ => Ok(()),
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Graph> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.family {
        Family::Tree => random_tree(spec.n, &mut rng),
        Family::ErdosRenyi => erdos_renyi(spec.n, spec.p, &mut rng),
        Family::BarabasiAlbert => barabasi_albert(spec.n, spec.m, &mut rng),
        Family::InternetAs => internet_as(spec.n, AS_TIER_FRACTIONS, &mut rng),
    }
}

/// Decodes a Prüfer sequence over labels `0..len+2` into its labelled tree.
pub fn tree_from_prufer(seq: &[usize]) -> Result<Graph> {
    let n = seq.len() + 2;
    if let Some(&bad) = seq.iter().find(|&&v| v >= n) {
        return Err(Error::OutOfRange { node: bad, n });
    }
    let mut remaining = vec![1usize; n];
    for &v in seq {
        remaining[v] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| remaining[v] == 1).map(Reverse).collect();
    let mut g = Graph::new(n)?;
    for &v in seq {
        let Reverse(leaf) = leaves.pop().expect("prufer decode always has a leaf");
        g.add_edge(leaf, v)?;
        remaining[v] -= 1;
        if remaining[v] == 1 {
            leaves.push(Reverse(v));
        }
    }
    let Reverse(a) = leaves.pop().expect("two leaves remain");
    let Reverse(b) = leaves.pop().expect("two leaves remain");
    g.add_edge(a, b)?;
    Ok(g)
}

fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if n == 1 {
        return Graph::new(1);
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    tree_from_prufer(&seq)
}

fn erdos_renyi(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    for _ in 0..ER_MAX_ATTEMPTS {
        let mut g = Graph::new(n)?;
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v)?;
                }
            }
        }
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::ConnectivityFailure { attempts: ER_MAX_ATTEMPTS })
}

/// Picks `count` distinct targets from `pool`, where repeated entries in the
/// pool act as weights.
fn distinct_from_pool(pool: &[usize], count: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::with_capacity(count);
    while chosen.len() < count {
        let v = pool[rng.gen_range(0..pool.len())];
        if !chosen.contains(&v) {
            chosen.push(v);
        }
    }
    chosen
}

fn barabasi_albert(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let mut g = Graph::new(n)?;
    if n == 1 {
        return Ok(g);
    }
    // Seed clique on m + 1 nodes; `pool` holds every edge endpoint, so uniform
    // draws from it are degree-proportional.
    let mut pool = Vec::new();
    for u in 0..=m {
        for v in u + 1..=m {
            g.add_edge(u, v)?;
            pool.extend([u, v]);
        }
    }
    for v in m + 1..n {
        for t in distinct_from_pool(&pool, m, rng) {
            g.add_edge(v, t)?;
            pool.extend([v, t]);
        }
    }
    Ok(g)
}

/// Three-tier AS-like topology: a clique of core providers, transit nodes that
/// attach preferentially to the core and earlier transit nodes, and stub nodes
/// homed on one or two transit providers.
pub fn internet_as(n: usize, fractions: [f64; 3], rng: &mut ChaCha8Rng) -> Result<Graph> {
    if fractions.iter().any(|f| !(0.0..=1.0).contains(f)) {
        return Err(Error::InvalidSpec(format!("tier fractions out of range: {fractions:?}")));
    }
    let mut g = Graph::new(n)?;
    let core = ((fractions[0] * n as f64).round() as usize).max(3).min(n);
    let transit = ((fractions[1] * n as f64).round() as usize).min(n - core);
    let mut pool = Vec::new();
    for u in 0..core {
        for v in u + 1..core {
            g.add_edge(u, v)?;
            pool.extend([u, v]);
        }
    }
    if pool.is_empty() {
        // single-node core
        pool.push(0);
    }
    for v in core..core + transit {
        let upstream = if v >= 2 { 2 } else { 1 };
        for t in distinct_from_pool(&pool, upstream, rng) {
            g.add_edge(v, t)?;
            pool.extend([v, t]);
        }
    }
    let providers: Vec<usize> = if transit > 0 { (core..core + transit).collect() } else { (0..core).collect() };
    for v in core + transit..n {
        let homes = if providers.len() >= 2 && rng.gen_bool(0.5) { 2 } else { 1 };
        for &t in providers.choose_multiple(rng, homes) {
            g.add_edge(v, t)?;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_node_tree_is_an_edge() {
        let g = generate(&GeneratorSpec::new(Family::Tree, 2, 7)).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn prufer_11_decodes_to_star_on_1() {
        let g = tree_from_prufer(&[1, 1]).unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.degree(1).unwrap(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (1, 3)]);
    }

    #[test]
    fn prufer_decode_matches_hand_example() {
        // sequence (3, 3, 3, 4) on 6 labels: leaves 0,1,2 hang off 3, then 3-4, 4-5
        let g = tree_from_prufer(&[3, 3, 3, 4]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 3), (1, 3), (2, 3), (3, 4), (4, 5)]);
    }

    #[test]
    fn ba_with_m1_is_a_tree() {
        for n in [2, 3, 10, 57] {
            let spec = GeneratorSpec { m: 1, ..GeneratorSpec::new(Family::BarabasiAlbert, n, 3) };
            let g = generate(&spec).unwrap();
            assert_eq!(g.edge_count(), n - 1);
            assert!(g.is_connected());
        }
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let er = GeneratorSpec { p: 0.0, ..GeneratorSpec::new(Family::ErdosRenyi, 10, 1) };
        assert!(matches!(generate(&er), Err(Error::InvalidSpec(_))));
        let er = GeneratorSpec { p: 1.5, ..er };
        assert!(matches!(generate(&er), Err(Error::InvalidSpec(_))));
        let ba = GeneratorSpec { m: 10, ..GeneratorSpec::new(Family::BarabasiAlbert, 10, 1) };
        assert!(matches!(generate(&ba), Err(Error::InvalidSpec(_))));
        assert!(generate(&GeneratorSpec::new(Family::Tree, 0, 1)).is_err());
    }

    #[test]
    fn sparse_er_exhausts_retry_budget() {
        let spec = GeneratorSpec { p: 1e-4, ..GeneratorSpec::new(Family::ErdosRenyi, 30, 1) };
        assert!(matches!(generate(&spec), Err(Error::ConnectivityFailure { attempts: ER_MAX_ATTEMPTS })));
    }

    #[test]
    fn all_families_connected_and_reproducible() {
        for family in Family::ALL {
            for n in [1, 2, 3, 5, 15, 100] {
                for seed in 0..5 {
                    let spec = GeneratorSpec::new(family, n, seed);
                    let g = generate(&spec).unwrap();
                    assert_eq!(g.node_count(), n);
                    assert!(g.is_connected(), "{family} n={n} seed={seed}");
                    assert_eq!(generate(&spec).unwrap(), g);
                }
            }
        }
    }

    #[test]
    fn family_names_roundtrip() {
        for family in Family::ALL {
            assert_eq!(family.as_str().parse::<Family>().unwrap(), family);
        }
        assert!("grid".parse::<Family>().is_err());
    }
}
