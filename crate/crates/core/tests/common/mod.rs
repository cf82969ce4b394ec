//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use nexcover::centrality::CostVector;
use nexcover::generators::{generate, Family, GeneratorSpec};
use nexcover::graph::Graph;

pub fn family_graph(family: Family, n: usize, seed: u64) -> Graph {
    generate(&GeneratorSpec::new(family, n, seed)).expect("generator draws a connected graph")
}

/// All-pairs hop distances by Floyd–Warshall.
pub fn distances(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (u, row) in d.iter_mut().enumerate() {
        row[u] = 0;
        for &w in g.neighbors(u) {
            row[w] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Betweenness by listing every shortest path of every unordered pair and
/// counting the interior nodes on each.
pub fn brute_betweenness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let d = distances(g);
    let mut cb = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            let mut paths = Vec::new();
            let mut path = vec![s];
            walk(g, &d, t, &mut path, &mut paths);
            let total = paths.len() as f64;
            let mut through = vec![0usize; n];
            for p in &paths {
                for &v in &p[1..p.len() - 1] {
                    through[v] += 1;
                }
            }
            for v in 0..n {
                cb[v] += through[v] as f64 / total;
            }
        }
    }
    cb
}

fn walk(g: &Graph, d: &[Vec<usize>], t: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let v = *path.last().unwrap();
    if v == t {
        out.push(path.clone());
        return;
    }
    for &w in g.neighbors(v) {
        if d[w][t] + 1 == d[v][t] {
            path.push(w);
            walk(g, d, t, path, out);
            path.pop();
        }
    }
}

/// Minimum-cost dominating set value by enumerating all `2^n` subsets.
pub fn brute_min_cover(g: &Graph, cost: &CostVector) -> (f64, usize) {
    let n = g.node_count();
    assert!(n <= 20);
    let closed: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(1u32 << v, |m, &w| m | 1 << w)).collect();
    let full = (1u32 << n) - 1;
    let mut best = (f64::INFINITY, usize::MAX);
    for mask in 0..=full {
        let covered = (0..n).filter(|&v| mask >> v & 1 == 1).fold(0, |m, v| m | closed[v]);
        if covered == full {
            let c: f64 = (0..n).filter(|&v| mask >> v & 1 == 1).map(|v| cost.values[v]).sum();
            if c < best.0 {
                best = (c, mask.count_ones() as usize);
            }
        }
    }
    best
}

/// Smallest dominating set size (domination number) by enumeration.
pub fn domination_number(g: &Graph) -> usize {
    brute_min_cover(g, &CostVector::uniform(g.node_count(), 1.0)).1
}

pub fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}
