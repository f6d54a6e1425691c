//! Separation oracle for the fractional sparsifier program.

use super::program::{FractionalGraph, ProgramSpec};
use crate::error::{Error, Result};
use crate::graphcore::{component_labels, laplacian, normalize, Weighted};
use crate::spectral::{ImageFactor, VERDICT_SLACK};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

/// Absolute tolerance on Σ y.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

/// The halfspace aᵀy ≤ b over support coordinates, violated by the
/// queried point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Halfspace {
    pub a: Vec<f64>,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Box { index: usize, value: f64 },
    Weight { sum: f64, target: f64 },
    /// An offset edge joins two target components; no y can repair this.
    OffsetCrossing { u: usize, v: usize },
    Spectral { direction: Direction, eigenvalue: f64, witness: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum OracleOutcome {
    Feasible { min_eigenvalue: f64, max_eigenvalue: f64 },
    Violated { violation: Violation, cut: Halfspace },
}

impl OracleOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, OracleOutcome::Feasible { .. })
    }
}

/// Precomputed factorization of the target for repeated queries.
pub struct Oracle<'a> {
    spec: &'a ProgramSpec,
    factor: ImageFactor,
    target_labels: Vec<usize>,
    target_lap: DMatrix<f64>,
    offset_lap: DMatrix<f64>,
    /// W·L_offset·Wᵀ.
    base: DMatrix<f64>,
    /// W(e_u − e_v) for each support pair.
    directions: Vec<DVector<f64>>,
}

impl<'a> Oracle<'a> {
    pub fn new(spec: &'a ProgramSpec) -> Result<Self> {
        let target_lap = laplacian(&spec.target);
        let offset_lap = laplacian(&spec.offset);
        let factor = ImageFactor::new(&target_lap)?;
        let base = factor.sandwich(&offset_lap);
        let w = factor.whiten();
        let directions = spec.support.iter().map(|&(u, v)| w.column(u) - w.column(v)).collect();
        Ok(Oracle {
            spec,
            factor,
            target_labels: component_labels(&spec.target),
            target_lap,
            offset_lap,
            base,
            directions,
        })
    }

    pub fn spec(&self) -> &ProgramSpec {
        self.spec
    }

    /// Checks y against the program with band `eps`, cheapest constraint
    /// first: box, total weight, components, spectral sandwich.
    ///
    /// The component step rejects candidate edges joining two target
    /// components. A candidate that splits a target component has a zero
    /// nontrivial eigenvalue and is rejected by the spectral step.
    pub fn check(&self, y: &[f64], eps: f64) -> Result<OracleOutcome> {
        let d = self.spec.d();
        if y.len() != d {
            return Err(Error::SizeMismatch { expected: d, got: y.len() });
        }
        for (i, &v) in y.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                let mut a = vec![0.0; d];
                let b = if v > 1.0 {
                    a[i] = 1.0;
                    1.0
                } else {
                    a[i] = -1.0;
                    0.0
                };
                return Ok(OracleOutcome::Violated { violation: Violation::Box { index: i, value: v }, cut: Halfspace { a, b } });
            }
        }
        let sum: f64 = y.iter().sum();
        let target = self.spec.total_weight;
        if (sum - target).abs() > WEIGHT_TOLERANCE * target.max(1.0) {
            let (a, b) = if sum > target { (vec![1.0; d], target) } else { (vec![-1.0; d], -target) };
            return Ok(OracleOutcome::Violated { violation: Violation::Weight { sum, target }, cut: Halfspace { a, b } });
        }
        if let Some(outcome) = self.check_components(y) {
            return Ok(outcome);
        }
        Ok(self.check_spectral(y, eps))
    }

    fn check_components(&self, y: &[f64]) -> Option<OracleOutcome> {
        let d = self.spec.d();
        let tl = &self.target_labels;
        if let Some((u, v, _)) = self.spec.offset.weighted_edges().find(|&(u, v, _)| tl[u] != tl[v]) {
            return Some(OracleOutcome::Violated {
                violation: Violation::OffsetCrossing { u, v },
                cut: Halfspace { a: vec![0.0; d], b: -1.0 },
            });
        }
        for (i, &(u, v)) in self.spec.support.iter().enumerate() {
            if y[i] > 0.0 && tl[u] != tl[v] {
                let mut a = vec![0.0; d];
                a[i] = 1.0;
                return Some(OracleOutcome::Violated {
                    violation: Violation::Box { index: i, value: y[i] },
                    cut: Halfspace { a, b: 0.0 },
                });
            }
        }
        None
    }

    fn check_spectral(&self, y: &[f64], eps: f64) -> OracleOutcome {
        let r = self.factor.rank();
        if r == 0 {
            return OracleOutcome::Feasible { min_eigenvalue: 1.0, max_eigenvalue: 1.0 };
        }
        let mut m = self.base.clone();
        for (w, &yi) in self.directions.iter().zip(y) {
            if yi != 0.0 {
                m.syger(yi, w, w, 1.0);
            }
        }
        let eig = SymmetricEigen::new(m);
        let (mut imin, mut imax) = (0, 0);
        for i in 0..r {
            if eig.eigenvalues[i] < eig.eigenvalues[imin] {
                imin = i;
            }
            if eig.eigenvalues[i] > eig.eigenvalues[imax] {
                imax = i;
            }
        }
        let (lo, hi) = (eig.eigenvalues[imin], eig.eigenvalues[imax]);
        let lo_ok = lo >= (1.0 - eps) * (1.0 - VERDICT_SLACK);
        let hi_ok = hi <= (1.0 + eps) * (1.0 + VERDICT_SLACK);
        if lo_ok && hi_ok {
            return OracleOutcome::Feasible { min_eigenvalue: lo, max_eigenvalue: hi };
        }
        // report the side that is violated by more
        let lower = !lo_ok && (hi_ok || (1.0 - eps) - lo >= hi - (1.0 + eps));
        let (idx, direction) = if lower { (imin, Direction::Lower) } else { (imax, Direction::Upper) };
        let v = eig.eigenvectors.column(idx).into_owned();
        let mut z = self.factor.lift(&v);
        let norm = z.norm();
        z /= norm;
        let quad = |l: &DMatrix<f64>| (l * &z).dot(&z);
        let zh = quad(&self.target_lap);
        let zo = quad(&self.offset_lap);
        let coeffs: Vec<f64> = self.spec.support.iter().map(|&(a, b)| (z[a] - z[b]).powi(2)).collect();
        let cut = match direction {
            Direction::Lower => Halfspace { a: coeffs.iter().map(|c| -c).collect(), b: -((1.0 - eps) * zh - zo) },
            Direction::Upper => Halfspace { a: coeffs, b: (1.0 + eps) * zh - zo },
        };
        OracleOutcome::Violated {
            violation: Violation::Spectral { direction, eigenvalue: eig.eigenvalues[idx], witness: z.iter().copied().collect() },
            cut,
        }
    }
}

/// Checks a fractional graph against `spec` at the program's own ε.
pub fn separation_oracle(spec: &ProgramSpec, y: &FractionalGraph) -> Result<OracleOutcome> {
    if y.n() != spec.n {
        return Err(Error::SizeMismatch { expected: spec.n, got: y.n() });
    }
    let mut dense = vec![0.0; spec.d()];
    for (&(u, v), &val) in y.support().iter().zip(y.y()) {
        let e = normalize(u, v);
        match spec.support.iter().position(|&s| s == e) {
            Some(i) => dense[i] = val,
            None if val == 0.0 => {}
            None => return Err(Error::InvalidParameter(format!("pair ({}, {}) is outside the program support", e.0, e.1))),
        }
    }
    Oracle::new(spec)?.check(&dense, spec.eps)
}
