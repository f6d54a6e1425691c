//! Edge strengths and the λ-weak-edge decomposition.

use crate::error::{Error, Result};
use crate::graphcore::{components, mincut, normalize, Edge, Graph};
use serde::Serialize;

/// Strength of `e`: the largest mincut of an induced subgraph containing
/// both endpoints. Exhaustive over vertex subsets; n ≤ 12.
pub fn edge_strength_bruteforce(g: &Graph, e: Edge) -> Result<f64> {
    const LIMIT: usize = 12;
    let n = g.n();
    if n > LIMIT {
        return Err(Error::TooLarge { n, limit: LIMIT });
    }
    let (u, v) = normalize(e.0, e.1);
    if !g.has_edge(u, v) {
        return Err(Error::EdgeNotFound(u, v));
    }
    let others: Vec<usize> = (0..n).filter(|&x| x != u && x != v).collect();
    let mut best = 0.0f64;
    for mask in 0u32..(1 << others.len()) {
        let mut s = vec![u, v];
        s.extend(others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x));
        let c = mincut(&g.induced(&s))?.value;
        best = best.max(c);
    }
    Ok(best)
}

/// Exact strengths of all edges, aligned with `g.edges()`.
///
/// Peels minimum cuts: a component with mincut c inherits level
/// max(parent level, c); the cut edges get that level as their strength and
/// the two sides are processed recursively.
pub fn edge_strengths(g: &Graph) -> Vec<f64> {
    let mut strength = vec![0.0f64; g.m()];
    let mut stack: Vec<(Vec<usize>, f64)> = vec![((0..g.n()).collect(), 0.0)];
    while let Some((verts, level)) = stack.pop() {
        if verts.len() < 2 {
            continue;
        }
        let sub = g.induced(&verts);
        if sub.m() == 0 {
            continue;
        }
        let mc = mincut(&sub).expect("at least two vertices");
        if mc.disconnected {
            for comp in components(&sub) {
                stack.push((comp.iter().map(|&i| verts[i]).collect(), level));
            }
            continue;
        }
        let level = level.max(mc.value);
        let mut inside = vec![false; verts.len()];
        for &i in &mc.side {
            inside[i] = true;
        }
        for &(a, b) in sub.edges() {
            if inside[a] != inside[b] {
                let e = normalize(verts[a], verts[b]);
                let idx = g.edges().binary_search(&e).expect("edge of induced subgraph");
                strength[idx] = level;
            }
        }
        let (left, right): (Vec<usize>, Vec<usize>) = (0..verts.len()).partition(|&i| inside[i]);
        stack.push((left.into_iter().map(|i| verts[i]).collect(), level));
        stack.push((right.into_iter().map(|i| verts[i]).collect(), level));
    }
    strength
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrengthDecomposition {
    pub lambda: f64,
    /// Edges of strength ≤ λ, sorted.
    #[serde(rename = "T")]
    pub weak_edges: Vec<Edge>,
    /// Connected components of G − T, ordered by smallest vertex.
    pub components: Vec<Vec<usize>>,
}

impl StrengthDecomposition {
    /// Component index of every vertex.
    pub fn labels(&self, n: usize) -> Vec<usize> {
        let mut labels = vec![0; n];
        for (i, comp) in self.components.iter().enumerate() {
            for &v in comp {
                labels[v] = i;
            }
        }
        labels
    }
}

pub fn weak_edge_decomposition(g: &Graph, lambda: f64) -> Result<StrengthDecomposition> {
    if !(lambda >= 1.0) {
        return Err(Error::InvalidParameter(format!("lambda must be at least 1, got {lambda}")));
    }
    let strengths = edge_strengths(g);
    let weak_edges: Vec<Edge> = g
        .edges()
        .iter()
        .zip(&strengths)
        .filter(|(_, &s)| s <= lambda)
        .map(|(&e, _)| e)
        .collect();
    let rest = g.without(&weak_edges);
    Ok(StrengthDecomposition { lambda, weak_edges, components: components(&rest) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_k5_bridge() -> Graph {
        let mut edges = Vec::new();
        for base in [0, 5] {
            for i in 0..5 {
                for j in i + 1..5 {
                    edges.push((base + i, base + j));
                }
            }
        }
        edges.push((4, 5));
        Graph::new(10, edges).unwrap()
    }

    #[test]
    fn bruteforce_examples() {
        let tree = Graph::new(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        for &e in tree.edges() {
            assert_eq!(edge_strength_bruteforce(&tree, e).unwrap(), 1.0);
        }
        assert_eq!(edge_strength_bruteforce(&Graph::complete(4), (0, 1)).unwrap(), 3.0);
        let tri = Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap();
        assert_eq!(edge_strength_bruteforce(&tri, (0, 1)).unwrap(), 2.0);
        assert_eq!(edge_strength_bruteforce(&tri, (2, 3)).unwrap(), 1.0);
        assert!(edge_strength_bruteforce(&tri, (0, 5)).is_err());
    }

    #[test]
    fn peeling_examples() {
        let star = Graph::new(6, (1..6).map(|v| (0, v))).unwrap();
        assert!(edge_strengths(&star).iter().all(|&s| s == 1.0));
        assert!(edge_strengths(&Graph::complete(5)).iter().all(|&s| s == 4.0));
        let g = two_k5_bridge();
        for (&e, &s) in g.edges().iter().zip(&edge_strengths(&g)) {
            assert_eq!(s, if e == (4, 5) { 1.0 } else { 4.0 }, "{e:?}");
        }
    }

    #[test]
    fn decomposition_examples() {
        let tree = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let d = weak_edge_decomposition(&tree, 1.0).unwrap();
        assert_eq!(d.weak_edges.len(), 3);
        assert_eq!(d.components.len(), 4);
        let d = weak_edge_decomposition(&Graph::complete(4), 2.0).unwrap();
        assert!(d.weak_edges.is_empty());
        assert_eq!(d.components, vec![vec![0, 1, 2, 3]]);
        let d = weak_edge_decomposition(&two_k5_bridge(), 3.0).unwrap();
        assert_eq!(d.weak_edges, vec![(4, 5)]);
        assert_eq!(d.components, vec![vec![0, 1, 2, 3, 4], vec![5, 6, 7, 8, 9]]);
        assert!(weak_edge_decomposition(&tree, 0.5).is_err());
    }
}
