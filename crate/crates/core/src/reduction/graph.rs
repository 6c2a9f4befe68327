use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::encoding::{IccColoring, SpinAssignment};
use crate::error::{Error, Result};
use crate::instances::BpspInstance;

/// Signed boundary sum `−Σ_k (−1)^η(k) [{x_k, x_{k+1}} = {u, v}]` for the
/// unordered vertex pair `{u, v}` (0-based vertices).
pub fn theta(x: &BpspInstance, u: usize, v: usize) -> i64 {
    let (a, b) = (u.min(v), u.max(v));
    (0..x.word().len() - 1)
        .filter(|&k| {
            let (p, q) = (x.vertex(k), x.vertex(k + 1));
            (p.min(q), p.max(q)) == (a, b)
        })
        .map(|k| if x.eta_at(k) == 1 { 1 } else { -1 })
        .sum()
}

/// Weighted graph on the cars of an instance. Edge list is sorted by
/// `(u, v)` with `u < v`; zero-weight pairs are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BpspGraph {
    n: usize,
    edges: Vec<(usize, usize, i64)>,
    adjacency: Vec<Vec<(usize, i64)>>,
}

impl BpspGraph {
    /// Builds a graph from an arbitrary weighted edge list; parallel edges are
    /// merged by addition and zero weights dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, i64)>) -> Result<Self> {
        let mut merged = BTreeMap::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange(u.max(v)));
            }
            if u == v {
                return Err(Error::Config(format!("self-loop on vertex {u}")));
            }
            *merged.entry((u.min(v), u.max(v))).or_insert(0) += w;
        }
        let edges: Vec<_> = merged.into_iter().filter(|&(_, w)| w != 0).map(|((u, v), w)| (u, v, w)).collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v, w) in &edges {
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }
        adjacency.iter_mut().for_each(|a| a.sort_unstable());
        Ok(BpspGraph { n, edges, adjacency })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, i64)] {
        &self.edges
    }

    pub fn neighbours(&self, v: usize) -> &[(usize, i64)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn weight(&self, u: usize, v: usize) -> i64 {
        self.adjacency[u].iter().find(|&&(w, _)| w == v).map_or(0, |&(_, w)| w)
    }

    pub fn total_weight(&self) -> i64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    /// Total weight of the edges whose endpoints get different colours.
    pub fn cut_weight(&self, z: &IccColoring) -> Result<i64> {
        if z.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: z.len() });
        }
        let c = z.colours();
        Ok(self.edges.iter().filter(|&&(u, v, _)| c[u] != c[v]).map(|e| e.2).sum())
    }

    pub fn cut_weight_spins(&self, z: &SpinAssignment) -> Result<i64> {
        self.cut_weight(&IccColoring::from(z))
    }

    /// `n m` header followed by `u v w` lines, vertices 1-based.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v, w) in &self.edges {
            let _ = writeln!(s, "{} {} {}", u + 1, v + 1, w);
        }
        s
    }
}

/// The BPSP graph: an edge for every adjacent pair of distinct cars whose
/// signed boundary sum is non-zero, weighted by that sum.
pub fn build_graph(x: &BpspInstance) -> BpspGraph {
    let boundaries = (0..x.word().len() - 1).filter_map(|k| {
        let (u, v) = (x.vertex(k), x.vertex(k + 1));
        (u != v).then(|| (u, v, if x.eta_at(k) == 1 { 1 } else { -1 }))
    });
    BpspGraph::from_edges(x.n(), boundaries).expect("boundaries reference valid vertices")
}
