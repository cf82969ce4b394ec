//! Betweenness centrality and the centrality-weighted selection cost.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Unnormalised betweenness per node, each unordered pair counted once.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector {
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    pub epsilon: f64,
}

impl Default for CostParams {
    fn default() -> Self {
        Self { epsilon: 1e-6 }
    }
}

impl CostParams {
    pub fn validate(&self) -> Result<()> {
        if self.epsilon > 0.0 && self.epsilon.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("epsilon must be positive, got {}", self.epsilon)))
        }
    }
}

/// Strictly positive per-node selection costs.
#[derive(Debug, Clone, PartialEq)]
pub struct CostVector {
    pub values: Vec<f64>,
}

impl CostVector {
    pub fn uniform(n: usize, value: f64) -> Self {
        Self { values: vec![value; n] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sum of costs over `ids`, accumulated in the order given.
    pub fn total(&self, ids: &[usize]) -> f64 {
        ids.iter().map(|&v| self.values[v]).sum()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self { values: self.values.iter().map(|c| c * k).collect() }
    }
}

/// Brandes' algorithm for unweighted graphs, `O(n m)`.
///
/// Accumulating from every source visits each unordered pair twice, so the
/// sums are halved at the end. Sources are processed in id order, which fixes
/// the floating-point summation order.
pub fn betweenness(g: &Graph) -> CentralityVector {
    const UNSEEN: u32 = u32::MAX;
    let n = g.node_count();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::with_capacity(2 * g.edge_count());
    offsets.push(0);
    for v in 0..n {
        targets.extend(g.neighbors(v).iter().map(|&w| w as u32));
        offsets.push(targets.len());
    }

    let mut cb = vec![0.0f64; n];
    let mut queue: Vec<u32> = Vec::with_capacity(n);
    let mut dist = vec![UNSEEN; n];
    let mut sigma = vec![0.0f64; n];
    let mut delta = vec![0.0f64; n];
    // Shortest-path DAG edges (pred, succ) in the order they were found.
    let mut dag: Vec<(u32, u32)> = Vec::with_capacity(targets.len());

    for s in 0..n {
        queue.clear();
        dag.clear();
        dist.fill(UNSEEN);
        sigma.fill(0.0);
        delta.fill(0.0);
        dist[s] = 0;
        sigma[s] = 1.0;
        queue.push(s as u32);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head] as usize;
            head += 1;
            let next = dist[v] + 1;
            for &w in &targets[offsets[v]..offsets[v + 1]] {
                let wi = w as usize;
                if dist[wi] == UNSEEN {
                    dist[wi] = next;
                    queue.push(w);
                }
                if dist[wi] == next {
                    sigma[wi] += sigma[v];
                    dag.push((v as u32, w));
                }
            }
        }
        // Every edge into w precedes every edge out of w, so walking the DAG
        // backwards sees delta[w] complete before it is propagated.
        for &(v, w) in dag.iter().rev() {
            let (v, w) = (v as usize, w as usize);
            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        }
        for &w in &queue[1..] {
            cb[w as usize] += delta[w as usize];
        }
    }
    for value in &mut cb {
        *value *= 0.5;
    }
    CentralityVector { values: cb }
}

fn check_costable(g: &Graph) -> Result<()> {
    if g.node_count() < 2 {
        return Err(Error::DegenerateGraph("cost is undefined on a single-node graph".into()));
    }
    if let Some(v) = (0..g.node_count()).find(|&v| g.neighbors(v).is_empty()) {
        return Err(Error::DegenerateGraph(format!("node {v} is isolated")));
    }
    Ok(())
}

/// `c_v = 1 / (deg(v)^2 * ln(1 + C_B(v) + epsilon))`.
pub fn cost_vector(g: &Graph, cb: &CentralityVector, params: &CostParams) -> Result<CostVector> {
    params.validate()?;
    check_costable(g)?;
    if cb.values.len() != g.node_count() {
        return Err(Error::DimensionMismatch { expected: g.node_count(), got: cb.values.len() });
    }
    let values = cb
        .values
        .iter()
        .enumerate()
        .map(|(v, &b)| {
            let deg = g.neighbors(v).len() as f64;
            1.0 / (deg * deg * (1.0 + b + params.epsilon).ln())
        })
        .collect();
    Ok(CostVector { values })
}

/// `c_v = 1 / deg(v)^2`: the centrality cost without its log factor.
pub fn degree_cost_vector(g: &Graph) -> Result<CostVector> {
    check_costable(g)?;
    let values = (0..g.node_count())
        .map(|v| {
            let deg = g.neighbors(v).len() as f64;
            1.0 / (deg * deg)
        })
        .collect();
    Ok(CostVector { values })
}
