//! Fractional graphs and the feasibility program they solve.

use crate::error::{Error, Result};
use crate::graphcore::{check_vertex, component_labels, normalize, Edge, Graph, Weighted, WeightedGraph};
use serde::Serialize;

/// Per-pair values y_e ∈ [0, 1] on an explicit support; pairs off the
/// support are 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FractionalGraph {
    n: usize,
    support: Vec<Edge>,
    y: Vec<f64>,
}

impl FractionalGraph {
    pub fn new(n: usize, support: Vec<Edge>, y: Vec<f64>) -> Result<Self> {
        if support.len() != y.len() {
            return Err(Error::SizeMismatch { expected: support.len(), got: y.len() });
        }
        check_support(n, &support)?;
        if let Some(&bad) = y.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidWeight(bad));
        }
        Ok(FractionalGraph { n, support, y })
    }

    /// Every support pair at value 1.
    pub fn indicator(g: &Graph) -> Self {
        FractionalGraph { n: g.n(), support: g.edges().to_vec(), y: vec![1.0; g.m()] }
    }

    pub fn empty(n: usize) -> Self {
        FractionalGraph { n, support: Vec::new(), y: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn support(&self) -> &[Edge] {
        &self.support
    }
    pub fn y(&self) -> &[f64] {
        &self.y
    }
    pub fn sum(&self) -> f64 {
        self.y.iter().sum()
    }

    /// G(Y): the pairs with positive value, weighted by y.
    pub fn to_weighted(&self) -> WeightedGraph {
        WeightedGraph::new(
            self.n,
            self.support.iter().zip(&self.y).filter(|(_, &v)| v > 0.0).map(|(&(u, v), &w)| (u, v, w)),
        )
        .expect("support validated on construction")
    }
}

impl Weighted for FractionalGraph {
    fn n(&self) -> usize {
        self.n
    }
    fn weighted_edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.support.iter().zip(&self.y).filter(|(_, &v)| v > 0.0).map(|(&(u, v), &w)| (u, v, w))
    }
}

pub(crate) fn check_support(n: usize, support: &[Edge]) -> Result<()> {
    let mut seen = std::collections::HashSet::with_capacity(support.len());
    for &(u, v) in support {
        check_vertex(u, n)?;
        check_vertex(v, n)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if !seen.insert(normalize(u, v)) {
            return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
        }
    }
    Ok(())
}

/// Find y on `support` with Σ y = `total_weight` such that
/// `offset + G(y)` is a (1 ± eps) spectral sparsifier of `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProgramSpec {
    pub n: usize,
    pub target: WeightedGraph,
    pub offset: WeightedGraph,
    pub support: Vec<Edge>,
    pub total_weight: f64,
    pub eps: f64,
}

impl ProgramSpec {
    pub fn new(
        target: WeightedGraph,
        offset: WeightedGraph,
        support: Vec<Edge>,
        total_weight: f64,
        eps: f64,
    ) -> Result<Self> {
        let n = target.n();
        if offset.n() != n {
            return Err(Error::SizeMismatch { expected: n, got: offset.n() });
        }
        let support: Vec<Edge> = support.into_iter().map(|(u, v)| normalize(u, v)).collect();
        check_support(n, &support)?;
        if let Some(&(u, v)) = support.iter().find(|&&(u, v)| offset.weight(u, v) > 0.0) {
            return Err(Error::InvalidParameter(format!("support pair ({u}, {v}) is an offset edge")));
        }
        if !(total_weight >= 0.0) || !total_weight.is_finite() {
            return Err(Error::InvalidParameter(format!("total weight must be nonnegative, got {total_weight}")));
        }
        if !(0.0..1.0).contains(&eps) {
            return Err(Error::InvalidParameter(format!("eps must lie in [0, 1), got {eps}")));
        }
        Ok(ProgramSpec { n, target, offset, support, total_weight, eps })
    }

    /// Plain program of `h` with Σ y = m over `support` and no offset.
    pub fn plain(h: &WeightedGraph, m: usize, support: Vec<Edge>, eps: f64) -> Result<Self> {
        Self::new(h.clone(), WeightedGraph::empty(h.n()), support, m as f64, eps)
    }

    pub fn d(&self) -> usize {
        self.support.len()
    }

    pub fn with_eps(&self, eps: f64) -> ProgramSpec {
        ProgramSpec { eps, ..self.clone() }
    }

    pub fn fractional(&self, y: Vec<f64>) -> Result<FractionalGraph> {
        FractionalGraph::new(self.n, self.support.clone(), y)
    }
}

/// All pairs whose endpoints share a connected component of `g`, minus
/// the pairs in `exclude`.
pub fn pairs_within_components<G: Weighted>(g: &G, exclude: &[Edge]) -> Vec<Edge> {
    let labels = component_labels(g);
    let n = g.n();
    let mut skip: Vec<Edge> = exclude.iter().map(|&(u, v)| normalize(u, v)).collect();
    skip.sort_unstable();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if labels[u] == labels[v] && skip.binary_search(&(u, v)).is_err() {
                out.push((u, v));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractional_validation() {
        assert!(FractionalGraph::new(3, vec![(0, 1)], vec![1.5]).is_err());
        assert!(FractionalGraph::new(3, vec![(0, 1), (1, 0)], vec![0.5, 0.5]).is_err());
        let f = FractionalGraph::new(3, vec![(0, 1), (1, 2)], vec![0.25, 0.0]).unwrap();
        assert_eq!(f.sum(), 0.25);
        assert_eq!(f.to_weighted().m(), 1);
    }

    #[test]
    fn spec_rejects_offset_overlap() {
        let h = WeightedGraph::from_graph(&Graph::complete(3));
        let off = WeightedGraph::new(3, [(0, 1, 1.0)]).unwrap();
        assert!(ProgramSpec::new(h.clone(), off, vec![(1, 0)], 1.0, 0.1).is_err());
        assert!(ProgramSpec::plain(&h, 3, vec![(0, 1)], 1.2).is_err());
    }

    #[test]
    fn within_component_pairs() {
        let g = Graph::new(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        assert_eq!(pairs_within_components(&g, &[(1, 0)]), vec![(0, 2), (1, 2), (3, 4)]);
    }
}
