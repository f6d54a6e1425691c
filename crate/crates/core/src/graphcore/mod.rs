//! Graph representations, cuts, Laplacians and the correlation clustering
//! objective.

mod cc;
mod cut;
pub mod io;

pub use cc::{cc_cost, cc_via_cuts};
pub use cut::{components, component_labels, cut_value, cut_value_mask, laplacian, mincut, MinCut};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// An unordered vertex pair, always stored with `.0 < .1`.
pub type Edge = (usize, usize);

/// Orders a pair so the smaller endpoint comes first.
#[inline]
pub fn normalize(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Number of unordered pairs on `n` vertices.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Dense index of the pair `u < v` in lexicographic order over `C(n, 2)`.
#[inline]
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_from_index(n: usize, idx: usize) -> Edge {
    let mut u = 0;
    let mut base = 0;
    loop {
        let row = n - u - 1;
        if idx < base + row {
            return (u, u + 1 + idx - base);
        }
        base += row;
        u += 1;
    }
}

/// Anything with a vertex count and nonnegative weighted edges.
pub trait Weighted {
    fn n(&self) -> usize;
    fn weighted_edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_;

    fn total_weight(&self) -> f64 {
        self.weighted_edges().map(|(_, _, w)| w).sum()
    }

    fn weighted_degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n()];
        for (u, v, w) in self.weighted_edges() {
            d[u] += w;
            d[v] += w;
        }
        d
    }
}

/// Simple unweighted graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a simple graph, rejecting self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = Vec::new();
        for (u, v) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            out.push(normalize(u, v));
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Graph { n, edges: out })
    }

    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new() }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges in sorted order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.edges.binary_search(&normalize(u, v)).is_ok()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Neighbourhood bitmasks; only valid for `n <= 64`.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.n <= 64, "bitmask adjacency needs n <= 64");
        let mut masks = vec![0u64; self.n];
        for &(u, v) in &self.edges {
            masks[u] |= 1 << v;
            masks[v] |= 1 << u;
        }
        masks
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// Graph with the edges of `remove` deleted (missing edges are ignored).
    pub fn without(&self, remove: &[Edge]) -> Graph {
        let mut drop: Vec<Edge> = remove.iter().map(|&(u, v)| normalize(u, v)).collect();
        drop.sort_unstable();
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| drop.binary_search(e).is_err())
            .collect();
        Graph { n: self.n, edges }
    }

    /// Union with another edge set on the same vertices; fails on overlap.
    pub fn union(&self, other: &Graph) -> Result<Graph> {
        if other.n != self.n {
            return Err(Error::SizeMismatch { expected: self.n, got: other.n });
        }
        Graph::new(self.n, self.edges.iter().chain(other.edges.iter()).copied())
    }

    /// Induced subgraph on `vertices`, relabelled to `0..vertices.len()` in
    /// the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX)
            .map(|&(u, v)| normalize(local[u], local[v]))
            .collect::<Vec<_>>();
        let mut g = Graph { n: vertices.len(), edges };
        g.edges.sort_unstable();
        g
    }
}

impl Weighted for Graph {
    fn n(&self) -> usize {
        self.n
    }
    fn weighted_edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|&(u, v)| (u, v, 1.0))
    }
}

/// Graph with strictly positive real edge weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut out = Vec::new();
        for (u, v, w) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidWeight(w));
            }
            let (a, b) = normalize(u, v);
            out.push((a, b, w));
        }
        out.sort_unstable_by_key(|&(u, v, _)| (u, v));
        if let Some(w) = out.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(WeightedGraph { n, edges: out })
    }

    pub fn empty(n: usize) -> Self {
        WeightedGraph { n, edges: Vec::new() }
    }

    pub fn from_graph(g: &Graph) -> Self {
        WeightedGraph { n: g.n, edges: g.edges.iter().map(|&(u, v)| (u, v, 1.0)).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        let (a, b) = normalize(u, v);
        self.edges
            .binary_search_by_key(&(a, b), |&(x, y, _)| (x, y))
            .map(|i| self.edges[i].2)
            .unwrap_or(0.0)
    }

    pub fn scaled(&self, factor: f64) -> WeightedGraph {
        assert!(factor > 0.0);
        WeightedGraph { n: self.n, edges: self.edges.iter().map(|&(u, v, w)| (u, v, w * factor)).collect() }
    }

    /// Sum of two weighted graphs on the same vertex set.
    pub fn plus(&self, other: &WeightedGraph) -> Result<WeightedGraph> {
        if other.n != self.n {
            return Err(Error::SizeMismatch { expected: self.n, got: other.n });
        }
        let mut map = std::collections::BTreeMap::new();
        for &(u, v, w) in self.edges.iter().chain(other.edges.iter()) {
            *map.entry((u, v)).or_insert(0.0) += w;
        }
        Ok(WeightedGraph { n: self.n, edges: map.into_iter().map(|((u, v), w)| (u, v, w)).collect() })
    }

    /// Unweighted support.
    pub fn support(&self) -> Graph {
        Graph { n: self.n, edges: self.edges.iter().map(|&(u, v, _)| (u, v)).collect() }
    }
}

impl Weighted for WeightedGraph {
    fn n(&self) -> usize {
        self.n
    }
    fn weighted_edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().copied()
    }
}

/// Disjoint clusters covering `0..n`, numbered by first appearance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    cluster_of: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Canonicalises arbitrary labels: clusters get indices `0..k` in order
    /// of their smallest vertex.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let mut cluster_of = Vec::with_capacity(labels.len());
        for &l in labels {
            let next = map.len();
            cluster_of.push(*map.entry(l).or_insert(next));
        }
        Partition { k: map.len(), cluster_of }
    }

    pub fn from_clusters(n: usize, clusters: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (i, c) in clusters.iter().enumerate() {
            for &v in c {
                check_vertex(v, n)?;
                if labels[v] != usize::MAX {
                    return Err(Error::InvalidParameter(format!("vertex {v} in two clusters")));
                }
                labels[v] = i;
            }
        }
        if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidParameter(format!("vertex {v} unassigned")));
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn singletons(n: usize) -> Self {
        Partition { cluster_of: (0..n).collect(), k: n }
    }

    pub fn single(n: usize) -> Self {
        Partition { cluster_of: vec![0; n], k: usize::from(n > 0) }
    }

    pub fn n(&self) -> usize {
        self.cluster_of.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cluster_of(&self, v: usize) -> usize {
        self.cluster_of[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.cluster_of
    }

    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &c) in self.cluster_of.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

pub(crate) fn check_vertex(v: usize, n: usize) -> Result<()> {
    if v >= n {
        Err(Error::VertexOutOfRange { vertex: v, n })
    } else {
        Ok(())
    }
}
