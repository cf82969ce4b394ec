//! Undirected simple graphs over dense node ids and their coverage matrices.
//!
//! Node ids are `0..n` and are never relabelled: growing a graph only appends
//! ids, which keeps per-node vectors (costs, fractional solutions) aligned
//! across incremental updates.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Undirected graph without self-loops or parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: usize,
}

impl Graph {
    /// Graph with `n` isolated nodes.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph needs at least one node".into()));
        }
        Ok(Self { adj: vec![Vec::new(); n], edges: 0 })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!("cycle needs n >= 3, got {n}")));
        }
        let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    /// Star with center 0 and `n - 1` leaves.
    pub fn star(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::from_edges(n, &edges)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Appends a new isolated node and returns its id.
    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    /// Inserts the undirected edge `{u, v}`. Self-loops, duplicates and
    /// unknown ids are rejected.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.node_count();
        for w in [u, v] {
            if w >= n {
                return Err(Error::OutOfRange { node: w, n });
            }
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at node {u}")));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})"))),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.edges += 1;
                Ok(())
            }
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.adj
            .get(v)
            .map(Vec::len)
            .ok_or(Error::OutOfRange { node: v, n: self.node_count() })
    }

    /// Sorted neighbour ids of `v`. Panics if `v` is out of range.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == n
    }

    /// Reads the plain-text edge-list format: a `n <count>` header followed by
    /// one whitespace-separated `u v` pair per line. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Self> {
        let mut graph: Option<Graph> = None;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut fields = trimmed.split_whitespace();
            let parse_err = |msg: String| Error::Parse { line: lineno, msg };
            match graph.as_mut() {
                None => {
                    if fields.next() != Some("n") {
                        return Err(parse_err("expected header `n <count>`".into()));
                    }
                    let count = fields
                        .next()
                        .ok_or_else(|| parse_err("missing node count".into()))?
                        .parse::<usize>()
                        .map_err(|e| parse_err(e.to_string()))?;
                    if fields.next().is_some() {
                        return Err(parse_err("trailing tokens after node count".into()));
                    }
                    graph = Some(Graph::new(count).map_err(|e| parse_err(e.to_string()))?);
                }
                Some(g) => {
                    let mut id = || -> Result<usize> {
                        fields
                            .next()
                            .ok_or_else(|| parse_err("expected `u v`".into()))?
                            .parse::<usize>()
                            .map_err(|e| parse_err(e.to_string()))
                    };
                    let (u, v) = (id()?, id()?);
                    if fields.next().is_some() {
                        return Err(parse_err("trailing tokens after edge".into()));
                    }
                    g.add_edge(u, v).map_err(|e| parse_err(e.to_string()))?;
                }
            }
        }
        graph.ok_or(Error::Parse { line: 0, msg: "empty edge list".into() })
    }

    pub fn write_edge_list<W: Write>(&self, mut writer: W) -> Result<()> {
        writer.write_all(self.to_edge_list().as_bytes())?;
        Ok(())
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.node_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Binary coverage matrix `A = A_adj + I`, stored row-wise as sorted column
/// indices. Row `u` lists every node that covers `u`, itself included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageMatrix {
    rows: Vec<Vec<usize>>,
}

impl CoverageMatrix {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Column indices with a one in row `u`. The matrix is symmetric, so this
    /// is also the support of column `u`.
    pub fn row(&self, u: usize) -> &[usize] {
        &self.rows[u]
    }

    pub fn get(&self, u: usize, v: usize) -> bool {
        self.rows[u].binary_search(&v).is_ok()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// `A x` for a dense vector `x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|row| row.iter().map(|&v| x[v]).sum()).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let n = self.dim();
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![0u8; n];
                for &v in row {
                    dense[v] = 1;
                }
                dense
            })
            .collect()
    }
}

pub fn build_coverage_matrix(g: &Graph) -> CoverageMatrix {
    let rows = (0..g.node_count())
        .map(|u| {
            let nbrs = g.neighbors(u);
            let mut row = Vec::with_capacity(nbrs.len() + 1);
            let split = nbrs.partition_point(|&v| v < u);
            row.extend_from_slice(&nbrs[..split]);
            row.push(u);
            row.extend_from_slice(&nbrs[split..]);
            row
        })
        .collect();
    CoverageMatrix { rows }
}
