//! S2: exact edge-multiplicity vector with effective-resistance recovery.

use super::hash::{keyed2, unit};
use crate::error::{Error, Result};
use crate::graphcore::{pair_count, pair_from_index, pair_index, Edge, Graph, WeightedGraph};
use crate::spectral::resistance_matrix;

/// Signed multiplicity per vertex pair, stored row-wise by smaller endpoint
/// so each vertex owns a contiguous slice.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSketch {
    n: usize,
    phi: f64,
    counts: Vec<i64>,
}

impl SpectralSketch {
    pub fn new(n: usize, phi: f64) -> Self {
        SpectralSketch { n, phi, counts: vec![0; pair_count(n)] }
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn update(&mut self, u: usize, v: usize, sign: i64) {
        let i = pair_index(self.n, u, v);
        self.counts[i] = self.counts[i].wrapping_add(sign);
    }

    pub(crate) fn merge_from(&mut self, other: &SpectralSketch) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a = a.wrapping_add(*b);
        }
    }

    pub(crate) fn counts(&self) -> &[i64] {
        &self.counts
    }

    pub(crate) fn counts_mut(&mut self) -> &mut [i64] {
        &mut self.counts
    }

    /// Index range of the pairs whose smaller endpoint is `v`.
    pub(crate) fn row(&self, v: usize) -> std::ops::Range<usize> {
        if v + 1 >= self.n {
            return self.counts.len()..self.counts.len();
        }
        let start = pair_index(self.n, v, v + 1);
        start..start + (self.n - v - 1)
    }

    /// The sketched graph minus `exclude`, provided it is simple.
    pub fn residual(&self, exclude: &[Edge]) -> Result<Graph> {
        let mut counts = self.counts.clone();
        for &(u, v) in exclude {
            let i = pair_index(self.n, u.min(v), u.max(v));
            counts[i] -= 1;
        }
        let mut edges = Vec::new();
        for (i, &c) in counts.iter().enumerate() {
            match c {
                0 => {}
                1 => edges.push(pair_from_index(self.n, i)),
                other => {
                    let (u, v) = pair_from_index(self.n, i);
                    return Err(Error::NonSimpleResidual(u, v, other));
                }
            }
        }
        Graph::new(self.n, edges)
    }
}

/// Sampling probability min(1, φ·R_eff) of each residual edge. Values
/// within 1e-9 of 1 are rounded up so forced edges survive round-off.
pub fn sampling_probabilities(g: &Graph, phi: f64) -> Result<Vec<f64>> {
    if g.m() == 0 {
        return Ok(Vec::new());
    }
    let r = resistance_matrix(g)?;
    Ok(g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let p = phi * r[(u, v)];
            if p >= 1.0 - 1e-9 {
                1.0
            } else {
                p
            }
        })
        .collect())
}

/// Recovers a spectral sparsifier of the sketched graph minus `exclude`.
///
/// Edge e is kept iff a uniform derived from (seed, e) falls below
/// p_e = min(1, φ·R_eff(e)); kept edges get weight 1/p_e. Edges with
/// R_eff ≥ 1/φ are therefore always kept with weight 1.
pub fn recover_spectral(s2: &SpectralSketch, seed: u64, exclude: &[Edge]) -> Result<WeightedGraph> {
    let g = s2.residual(exclude)?;
    let probs = sampling_probabilities(&g, s2.phi)?;
    let kept = g
        .edges()
        .iter()
        .zip(&probs)
        .filter(|(&(u, v), &p)| p >= 1.0 || unit(keyed2(seed ^ 0x5EC7, u as u64, v as u64)) < p)
        .map(|(&(u, v), &p)| (u, v, 1.0 / p));
    WeightedGraph::new(s2.n, kept)
}
