//! Deterministic merge-and-reduce spectral sparsifier for insertion streams.

use crate::error::Result;
use crate::graphcore::{laplacian, Edge, WeightedGraph};
use crate::spectral::{is_spectral_sparsifier, ImageFactor};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

/// Degree parameter d with (κ − 1)/(κ + 1) = ε for the barrier condition
/// number κ = (√d + 1)²/(√d − 1)².
pub fn bss_degree(eps: f64) -> f64 {
    let s = (1.0 + (1.0 - eps * eps).max(0.0).sqrt()) / eps;
    s * s
}

/// Barrier-method sparsifier with at most ⌈d·r⌉ edges (r = rank of L_g).
///
/// Returns `None` when the result would not be smaller than `g` or the
/// barrier potentials break down numerically; callers verify the output.
pub fn bss_sparsify(g: &WeightedGraph, eps: f64) -> Result<Option<WeightedGraph>> {
    let d = bss_degree(eps);
    let factor = ImageFactor::new(&laplacian(g))?;
    let r = factor.rank();
    let steps = (d * r as f64).ceil() as usize;
    if r == 0 || steps >= g.m() {
        return Ok(None);
    }
    let w = factor.whiten();
    let vectors: Vec<DVector<f64>> = g
        .edges()
        .iter()
        .map(|&(u, v, wt)| (w.column(u) - w.column(v)) * wt.sqrt())
        .collect();

    let sd = d.sqrt();
    let (delta_l, delta_u) = (1.0, (sd + 1.0) / (sd - 1.0));
    let (eps_l, eps_u) = (1.0 / sd, (sd - 1.0) / (d + sd));
    let mut l = -(r as f64) / eps_l;
    let mut u = r as f64 / eps_u;
    let mut a = DMatrix::<f64>::zeros(r, r);
    let mut s = vec![0.0; vectors.len()];

    for _ in 0..steps {
        let eig = SymmetricEigen::new(a.clone());
        let lam = &eig.eigenvalues;
        let (u2, l2) = (u + delta_u, l + delta_l);
        let phi_u: f64 = lam.iter().map(|&x| 1.0 / (u - x)).sum();
        let phi_u2: f64 = lam.iter().map(|&x| 1.0 / (u2 - x)).sum();
        let phi_l: f64 = lam.iter().map(|&x| 1.0 / (x - l)).sum();
        let phi_l2: f64 = lam.iter().map(|&x| 1.0 / (x - l2)).sum();
        let (du, dl) = (phi_u - phi_u2, phi_l2 - phi_l);
        if !(du > 0.0 && dl > 0.0) {
            return Ok(None);
        }
        let mut best: Option<(usize, f64, f64)> = None;
        for (i, v) in vectors.iter().enumerate() {
            let p = eig.eigenvectors.tr_mul(v);
            let (mut u1, mut u2s, mut l1, mut l2s) = (0.0, 0.0, 0.0, 0.0);
            for (j, &x) in lam.iter().enumerate() {
                let q = p[j] * p[j];
                u1 += q / (u2 - x);
                u2s += q / ((u2 - x) * (u2 - x));
                l1 += q / (x - l2);
                l2s += q / ((x - l2) * (x - l2));
            }
            let upper = u2s / du + u1;
            let lower = l2s / dl - l1;
            if lower >= upper && upper > 0.0 && best.is_none_or(|(_, bu, bl)| lower - upper > bl - bu) {
                best = Some((i, upper, lower));
            }
        }
        let Some((i, upper, lower)) = best else {
            return Ok(None);
        };
        let t = 2.0 / (upper + lower);
        a += &vectors[i] * vectors[i].transpose() * t;
        s[i] += t;
        u = u2;
        l = l2;
    }

    let eig = SymmetricEigen::new(a);
    let lo = eig.eigenvalues.min();
    let hi = eig.eigenvalues.max();
    if !(lo > 0.0) {
        return Ok(None);
    }
    let scale = 2.0 / (lo + hi);
    let edges: Vec<(usize, usize, f64)> = g
        .edges()
        .iter()
        .zip(&s)
        .filter(|(_, &si)| si > 0.0)
        .map(|(&(u, v, wt), &si)| (u, v, wt * si * scale))
        .collect();
    if edges.len() >= g.m() {
        return Ok(None);
    }
    Ok(Some(WeightedGraph::new(g.n(), edges)?))
}

/// Budget of merge level i: ln(1 + ε)·2^{−(i+1)}, so the products of
/// (1 ± ε_i) over all levels stay within 1 ± ε.
pub fn level_eps(eps: f64, level: usize) -> f64 {
    (1.0 + eps).ln() * 0.5f64.powi(level as i32 + 1)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ReduceStats {
    pub merges: usize,
    pub reductions: usize,
}

/// Binary counter of blocks: leaves are exact blocks of `block_size`
/// edges; two blocks at level i are merged and reduced at budget ε_i into
/// one block at level i + 1.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterministicSparsifier {
    n: usize,
    eps: f64,
    block_size: usize,
    buffer: Vec<Edge>,
    levels: Vec<Option<WeightedGraph>>,
    stats: ReduceStats,
}

impl DeterministicSparsifier {
    pub fn new(n: usize, eps: f64) -> Self {
        let block = (2.0 * bss_degree(level_eps(eps, 0)) * n as f64).ceil() as usize;
        Self::with_block_size(n, eps, block)
    }

    pub fn with_block_size(n: usize, eps: f64, block_size: usize) -> Self {
        DeterministicSparsifier { n, eps, block_size: block_size.max(1), buffer: Vec::new(), levels: Vec::new(), stats: ReduceStats::default() }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn stats(&self) -> ReduceStats {
        self.stats
    }

    pub fn push(&mut self, e: Edge) -> Result<()> {
        self.buffer.push(e);
        if self.buffer.len() < self.block_size {
            return Ok(());
        }
        let mut carry = WeightedGraph::new(self.n, self.buffer.drain(..).map(|(u, v)| (u, v, 1.0)))?;
        let mut level = 0;
        loop {
            if level == self.levels.len() {
                self.levels.push(None);
            }
            match self.levels[level].take() {
                None => {
                    self.levels[level] = Some(carry);
                    return Ok(());
                }
                Some(other) => {
                    let merged = other.plus(&carry)?;
                    carry = self.reduce(merged, level_eps(self.eps, level))?;
                    level += 1;
                }
            }
        }
    }

    fn reduce(&mut self, merged: WeightedGraph, eps: f64) -> Result<WeightedGraph> {
        self.stats.merges += 1;
        if let Some(out) = bss_sparsify(&merged, eps)? {
            if is_spectral_sparsifier(&out, &merged, eps)?.ok {
                self.stats.reductions += 1;
                return Ok(out);
            }
        }
        Ok(merged)
    }

    /// Sum of all stored blocks and the unflushed buffer.
    pub fn current(&self) -> Result<WeightedGraph> {
        let mut acc = WeightedGraph::new(self.n, self.buffer.iter().map(|&(u, v)| (u, v, 1.0)))?;
        for block in self.levels.iter().flatten() {
            acc = acc.plus(block)?;
        }
        Ok(acc)
    }

    pub fn stored_edges(&self) -> usize {
        self.buffer.len() + self.levels.iter().flatten().map(WeightedGraph::m).sum::<usize>()
    }

    /// Canonical bytes of the state: parameters, buffer, then every level.
    pub fn write_state(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.n as u64).to_le_bytes());
        out.extend_from_slice(&self.eps.to_le_bytes());
        out.extend_from_slice(&(self.block_size as u64).to_le_bytes());
        out.extend_from_slice(&(self.buffer.len() as u64).to_le_bytes());
        for &(u, v) in &self.buffer {
            out.extend_from_slice(&(u as u64).to_le_bytes());
            out.extend_from_slice(&(v as u64).to_le_bytes());
        }
        out.extend_from_slice(&(self.levels.len() as u64).to_le_bytes());
        for level in &self.levels {
            match level {
                None => out.push(0),
                Some(g) => {
                    out.push(1);
                    out.extend_from_slice(&(g.m() as u64).to_le_bytes());
                    for &(u, v, w) in g.edges() {
                        out.extend_from_slice(&(u as u64).to_le_bytes());
                        out.extend_from_slice(&(v as u64).to_le_bytes());
                        out.extend_from_slice(&w.to_bits().to_le_bytes());
                    }
                }
            }
        }
    }
}
