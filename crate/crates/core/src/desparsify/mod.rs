//! Recovery of simple total-weight-preserving sparsifiers.
//!
//! A fractional point is found by the ellipsoid method against a spectral
//! separation oracle, then rounded edge by edge until the edge count is
//! exact. The pipelines wire this to weighted sparsifiers and to sketches.

mod ellipsoid;
mod oracle;
mod pipeline;
mod program;
mod rounding;

pub use ellipsoid::{default_max_iters, ellipsoid_feasibility, solve, EllipsoidReport, Termination, RADIUS_THRESHOLD, TIGHTENING};
pub use oracle::{separation_oracle, Direction, Halfspace, Oracle, OracleOutcome, Violation, WEIGHT_TOLERANCE};
pub use program::{pairs_within_components, FractionalGraph, ProgramSpec};
pub use pipeline::{
    desparsify_cut, desparsify_from_sketch, desparsify_spectral, desparsify_spectral_from_sketch, max_pair_resistance,
    small_resistance_pairs, ComponentStats, Desparsified, PipelineConfig, Provenance, COMPOSED_BAND,
};
pub use rounding::{attempt_rng, default_max_attempts, round_bernoulli, round_exact_weight, Rounded};
