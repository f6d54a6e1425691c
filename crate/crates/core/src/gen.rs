//! Instance generators.

use crate::error::{Error, Result};
use crate::graphcore::{normalize, Edge, Graph, WeightedGraph};
use crate::spectral::resistance_matrix;
use rand::seq::SliceRandom;
use rand::Rng;

/// Disjoint cliques of the given sizes plus `bridges` edges, bridge j
/// joining clique j mod k to clique (j + 1) mod k.
pub fn clique_union(sizes: &[usize], bridges: usize) -> Result<Graph> {
    let k = sizes.len();
    if bridges > 0 && k < 2 {
        return Err(Error::InvalidParameter("bridges need at least two cliques".into()));
    }
    if sizes.contains(&0) {
        return Err(Error::InvalidParameter("clique sizes must be positive".into()));
    }
    let mut offsets = Vec::with_capacity(k);
    let mut n = 0;
    for &s in sizes {
        offsets.push(n);
        n += s;
    }
    let mut edges = Vec::new();
    for (&base, &s) in offsets.iter().zip(sizes) {
        for i in 0..s {
            for j in i + 1..s {
                edges.push((base + i, base + j));
            }
        }
    }
    for j in 0..bridges {
        let (a, b) = (j % k, (j + 1) % k);
        let round = j / k;
        if round >= sizes[a] || round >= sizes[b] {
            return Err(Error::InvalidParameter(format!("too many bridges ({bridges}) for clique sizes")));
        }
        edges.push((offsets[a] + sizes[a] - 1 - round, offsets[b] + round));
    }
    Graph::new(n, edges)
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::TooFewVertices { need: 3, got: n });
    }
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
}

/// Random recursive tree: vertex v attaches to a uniform earlier vertex.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    Graph::new(n, (1..n).map(|v| (rng.gen_range(0..v), v))).expect("tree edges are valid")
}

/// Erdős–Rényi G(n, p).
pub fn random_gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("edge probability must lie in [0, 1], got {p}")));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Union of ⌈degree/2⌉ random Hamiltonian cycles (duplicates merged).
pub fn expander_like<R: Rng + ?Sized>(n: usize, degree: usize, rng: &mut R) -> Result<Graph> {
    if n < 3 {
        return Err(Error::TooFewVertices { need: 3, got: n });
    }
    let mut edges: Vec<Edge> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..degree.div_ceil(2) {
        order.shuffle(rng);
        for i in 0..n {
            edges.push(normalize(order[i], order[(i + 1) % n]));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Graph::new(n, edges)
}

/// Importance sample of `g`: edge e kept with p_e = min(1, c·R_eff(e)) and
/// weight 1/p_e.
pub fn resistance_sample<R: Rng + ?Sized>(g: &Graph, c: f64, rng: &mut R) -> Result<WeightedGraph> {
    if g.m() == 0 {
        return Ok(WeightedGraph::empty(g.n()));
    }
    let r = resistance_matrix(g)?;
    let mut kept = Vec::new();
    for &(u, v) in g.edges() {
        let p = (c * r[(u, v)]).min(1.0);
        if p >= 1.0 || rng.gen::<f64>() < p {
            kept.push((u, v, 1.0 / p));
        }
    }
    WeightedGraph::new(g.n(), kept)
}

/// Random split of the edges of `g` into `k` disjoint sets.
pub fn split_edges<R: Rng + ?Sized>(g: &Graph, k: usize, rng: &mut R) -> Vec<Vec<Edge>> {
    let mut parts = vec![Vec::new(); k.max(1)];
    for &e in g.edges() {
        parts[rng.gen_range(0..k.max(1))].push(e);
    }
    parts
}
