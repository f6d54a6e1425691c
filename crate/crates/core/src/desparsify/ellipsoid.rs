//! Ellipsoid method over the affine slice {y : Σ y = total}.
//!
//! The total-weight equality is kept exact by working in the hyperplane:
//! the center always sums to `total` and the shape matrix lives on the
//! orthogonal complement of the all-ones vector, so the effective
//! dimension is k = d − 1.

use super::oracle::{Oracle, OracleOutcome, Violation, WEIGHT_TOLERANCE};
use super::program::{FractionalGraph, ProgramSpec};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// Radius of the smallest feasible ball the search still resolves.
pub const RADIUS_THRESHOLD: f64 = 1e-8;
/// The oracle is queried at ε − ε·TIGHTENING.
pub const TIGHTENING: f64 = 0.01;

/// ⌈50·d²·ln(1/RADIUS_THRESHOLD)⌉.
pub fn default_max_iters(d: usize) -> u64 {
    ((50.0 * (d * d) as f64 * (1.0 / RADIUS_THRESHOLD).ln()).ceil() as u64).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Feasible,
    /// A violated halfspace excluded the whole ellipsoid.
    Certificate,
    /// Volume fell below the ball of radius [`RADIUS_THRESHOLD`].
    Volume,
    MaxIters,
    /// Decided without iterating: the slice is empty or a single point.
    Precheck,
    /// The shape matrix lost positive definiteness.
    Numerical,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EllipsoidReport {
    pub feasible: bool,
    pub point: Option<FractionalGraph>,
    pub iterations: u64,
    /// ½·ln det of the shape matrix on the hyperplane.
    pub final_volume_log: f64,
    pub termination: Termination,
    pub diagnostic: Option<String>,
}

impl EllipsoidReport {
    fn infeasible(iterations: u64, volume: f64, termination: Termination, why: String) -> Self {
        EllipsoidReport {
            feasible: false,
            point: None,
            iterations,
            final_volume_log: volume,
            termination,
            diagnostic: Some(why),
        }
    }
}

fn single_point(spec: &ProgramSpec, oracle: &Oracle, y: Vec<f64>, eps: f64) -> Result<EllipsoidReport> {
    let outcome = oracle.check(&y, eps)?;
    Ok(match outcome {
        OracleOutcome::Feasible { .. } => EllipsoidReport {
            feasible: true,
            point: Some(spec.fractional(y)?),
            iterations: 1,
            final_volume_log: f64::NEG_INFINITY,
            termination: Termination::Precheck,
            diagnostic: None,
        },
        OracleOutcome::Violated { violation, .. } => EllipsoidReport::infeasible(
            1,
            f64::NEG_INFINITY,
            Termination::Precheck,
            format!("the only point with the required total weight is rejected: {violation:?}"),
        ),
    })
}

/// Searches for y accepted by the oracle at the tightened band.
pub fn ellipsoid_feasibility(spec: &ProgramSpec, max_iters: Option<u64>) -> Result<EllipsoidReport> {
    let d = spec.d();
    let total = spec.total_weight;
    let eps = spec.eps * (1.0 - TIGHTENING);
    let oracle = Oracle::new(spec)?;
    let tol = WEIGHT_TOLERANCE * total.max(1.0);

    if total > d as f64 + tol {
        return Ok(EllipsoidReport::infeasible(
            0,
            f64::NEG_INFINITY,
            Termination::Precheck,
            format!("total weight {total} exceeds support size {d}"),
        ));
    }
    if d == 0 || total <= tol {
        return single_point(spec, &oracle, vec![0.0; d], eps);
    }
    if total >= d as f64 - tol {
        return single_point(spec, &oracle, vec![1.0; d], eps);
    }
    if d == 1 {
        return single_point(spec, &oracle, vec![total], eps);
    }

    let k = (d - 1) as f64;
    let df = d as f64;
    let max_iters = max_iters.unwrap_or_else(|| default_max_iters(d));
    let mut c = DVector::from_element(d, total / df);
    let mut p = DMatrix::from_fn(d, d, |i, j| if i == j { df - 1.0 } else { -1.0 });
    let mut volume = 0.5 * k * df.ln();
    let threshold = k * RADIUS_THRESHOLD.ln();

    let mut iter = 0u64;
    while iter < max_iters {
        iter += 1;
        let y: Vec<f64> = c.iter().copied().collect();
        let cut = match oracle.check(&y, eps)? {
            OracleOutcome::Feasible { .. } => {
                return Ok(EllipsoidReport {
                    feasible: true,
                    point: Some(spec.fractional(y)?),
                    iterations: iter,
                    final_volume_log: volume,
                    termination: Termination::Feasible,
                    diagnostic: None,
                });
            }
            OracleOutcome::Violated { violation: Violation::Weight { sum, .. }, .. } => {
                // drift off the hyperplane; project back and retry
                c.add_scalar_mut((total - sum) / df);
                continue;
            }
            OracleOutcome::Violated { cut, .. } => cut,
        };
        let a = DVector::from_vec(cut.a);
        let a_mean = a.mean();
        let ap = a.add_scalar(-a_mean);
        let g = &p * &ap;
        let s2 = ap.dot(&g);
        let excess = a.dot(&c) - cut.b;
        if !(s2 > 0.0) || !s2.is_finite() {
            if s2.is_nan() || s2 < -1e-12 {
                return Ok(EllipsoidReport::infeasible(iter, volume, Termination::Numerical, "shape matrix is not positive semidefinite".into()));
            }
            // the constraint is constant on the slice
            return Ok(EllipsoidReport::infeasible(
                iter,
                volume,
                Termination::Certificate,
                format!("constraint violated everywhere on the slice by {excess}"),
            ));
        }
        let s = s2.sqrt();
        let alpha = (excess / s).max(0.0);
        if alpha >= 1.0 {
            return Ok(EllipsoidReport::infeasible(
                iter,
                volume,
                Termination::Certificate,
                format!("deep cut with depth {alpha} excludes the ellipsoid"),
            ));
        }
        let gs = g / s;
        if d == 2 {
            let shrink = (1.0 - alpha) / 2.0;
            c.axpy(-(1.0 + alpha) / 2.0, &gs, 1.0);
            p *= shrink * shrink;
            volume += shrink.ln();
        } else {
            let tau = (1.0 + k * alpha) / (k + 1.0);
            let sigma = 2.0 * (1.0 + k * alpha) / ((k + 1.0) * (1.0 + alpha));
            let delta = k * k * (1.0 - alpha * alpha) / (k * k - 1.0);
            c.axpy(-tau, &gs, 1.0);
            p.ger(-sigma, &gs, &gs, 1.0);
            p *= delta;
            volume += 0.5 * k * delta.ln() + 0.5 * (1.0 - sigma).ln();
        }
        // keep c on the slice and P on the complement of 1
        c.add_scalar_mut((total - c.sum()) / df);
        let row_means: Vec<f64> = (0..d).map(|i| p.row(i).mean()).collect();
        let all_mean = row_means.iter().sum::<f64>() / df;
        for i in 0..d {
            for j in 0..d {
                p[(i, j)] -= row_means[i] + row_means[j] - all_mean;
            }
        }
        for i in 0..d {
            for j in i + 1..d {
                let m = 0.5 * (p[(i, j)] + p[(j, i)]);
                p[(i, j)] = m;
                p[(j, i)] = m;
            }
        }
        if volume < threshold {
            return Ok(EllipsoidReport::infeasible(
                iter,
                volume,
                Termination::Volume,
                format!("volume below a ball of radius {RADIUS_THRESHOLD} after {iter} iterations"),
            ));
        }
    }
    Ok(EllipsoidReport::infeasible(iter, volume, Termination::MaxIters, format!("no feasible point within {max_iters} iterations")))
}

/// Runs the ellipsoid search and re-verifies the point with a fresh oracle
/// at the program's own ε.
pub fn solve(spec: &ProgramSpec, max_iters: Option<u64>) -> Result<(FractionalGraph, EllipsoidReport)> {
    let report = ellipsoid_feasibility(spec, max_iters)?;
    let point = match (&report.point, report.feasible) {
        (Some(p), true) => p.clone(),
        _ => {
            return Err(Error::Infeasible(
                report.diagnostic.clone().unwrap_or_else(|| "ellipsoid search failed".into()),
            ))
        }
    };
    let recheck = super::oracle::separation_oracle(spec, &point)?;
    if !recheck.is_feasible() {
        return Err(Error::Infeasible(format!("post-check rejected the ellipsoid point: {recheck:?}")));
    }
    Ok((point, report))
}
