//! Greedy sequence of edge-disjoint spanners.

use crate::error::{Error, Result};
use crate::graphcore::{check_vertex, normalize, Edge, Graph};
use serde::Serialize;
use std::collections::VecDeque;

/// Where an inserted edge ended up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Placement {
    Spanner(usize),
    Overflow,
}

/// ℓ spanners T_1..T_ℓ filled greedily: an edge goes to the first T_i in
/// which its endpoints are at distance ≥ `stretch`, so no T_i contains a
/// cycle of length ≤ `stretch`. An edge rejected by all of them has a path
/// of length < `stretch` in every T_i, hence effective resistance at most
/// (stretch − 1)/ℓ in their union.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpannerSequence {
    n: usize,
    stretch: usize,
    adj: Vec<Vec<Vec<usize>>>,
    edges: Vec<Vec<Edge>>,
}

/// ⌈log₂ n⌉, at least 1.
pub fn default_stretch(n: usize) -> usize {
    (usize::BITS - n.max(2).saturating_sub(1).leading_zeros()) as usize
}

impl SpannerSequence {
    pub fn new(n: usize, count: usize, stretch: usize) -> Self {
        SpannerSequence {
            n,
            stretch: stretch.max(1),
            adj: vec![vec![Vec::new(); n]; count.max(1)],
            edges: vec![Vec::new(); count.max(1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self) -> usize {
        self.edges.len()
    }

    pub fn stretch(&self) -> usize {
        self.stretch
    }

    /// Edges of T_i in insertion order.
    pub fn spanner(&self, i: usize) -> &[Edge] {
        &self.edges[i]
    }

    /// Hop distance between `u` and `v` in T_i, or `None` if it exceeds `limit`.
    pub fn distance_within(&self, i: usize, u: usize, v: usize, limit: usize) -> Option<usize> {
        if u == v {
            return Some(0);
        }
        let adj = &self.adj[i];
        let mut dist = vec![usize::MAX; self.n];
        dist[u] = 0;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if dist[x] >= limit {
                break;
            }
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    if y == v {
                        return Some(dist[y]);
                    }
                    queue.push_back(y);
                }
            }
        }
        None
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.adj.iter().any(|a| a[u].contains(&v))
    }

    pub fn insert(&mut self, u: usize, v: usize) -> Result<Placement> {
        check_vertex(u, self.n)?;
        check_vertex(v, self.n)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let e = normalize(u, v);
        if self.contains(e.0, e.1) {
            return Err(Error::DuplicateEdge(e.0, e.1));
        }
        for i in 0..self.count() {
            if self.distance_within(i, e.0, e.1, self.stretch - 1).is_none() {
                self.adj[i][e.0].push(e.1);
                self.adj[i][e.1].push(e.0);
                self.edges[i].push(e);
                return Ok(Placement::Spanner(i));
            }
        }
        Ok(Placement::Overflow)
    }

    pub fn total_edges(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Union of all spanners as one graph (they are edge-disjoint).
    pub fn union(&self) -> Graph {
        Graph::new(self.n, self.edges.iter().flatten().copied()).expect("spanners are edge-disjoint")
    }

    /// Shortest cycle length through each edge is > stretch in every T_i.
    pub fn check_girth(&self) -> bool {
        let mut probe = self.clone();
        for i in 0..self.count() {
            for &(u, v) in &self.edges[i] {
                let adj = &mut probe.adj[i];
                adj[u].retain(|&x| x != v);
                adj[v].retain(|&x| x != u);
                let short = probe.distance_within(i, u, v, self.stretch - 1).is_some();
                probe.adj[i][u].push(v);
                probe.adj[i][v].push(u);
                if short {
                    return false;
                }
            }
        }
        true
    }
}
