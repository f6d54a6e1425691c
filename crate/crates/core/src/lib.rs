//! De-sparsification of graph sparsifiers.
//!
//! Recovers simple, unweighted, total-weight-preserving cut and spectral
//! sparsifiers from weighted sparsifiers or from linear sketches, and runs
//! unweighted correlation clustering on the result. The [`harness`] module
//! simulates the dynamic-stream, distributed, MPC and deterministic
//! insertion-only models on top of the same machinery.
//!
//! Data-parallel inner loops (cut enumeration, rounding attempts, multi-seed
//! clustering) run on rayon when the `parallel` feature is enabled (default)
//! and fall back to plain iterators otherwise. See [`parallel`].

pub mod cluster;
pub mod desparsify;
pub mod error;
pub mod gen;
pub mod graphcore;
pub mod harness;
pub mod parallel;
pub mod profile;
pub mod report;
pub mod sketches;
pub mod spectral;
pub mod strength;

pub use error::{Error, Result};
pub use graphcore::{Graph, Partition, WeightedGraph, Weighted};
pub use profile::Profile;
