//! Simulations of the sublinear models: dynamic streams, the coordinator
//! model, two-round MPC and the deterministic insertion-only pipeline.

mod det_sparsifier;
mod distributed;
mod insertion;
mod spanner;
mod stream;

pub use det_sparsifier::{bss_degree, bss_sparsify, level_eps, DeterministicSparsifier, ReduceStats};
pub use distributed::{
    default_mpc_cap, distributed_run, max_slice_bytes, mpc_run, union_of_parts, CommReport, DistributedRun, MpcReport,
    MpcRun, SEED_BYTES,
};
pub use insertion::{insertion_only_run, DeterministicState, GuardedRng, InsertionRun, REPARAMETERIZATION};
pub use spanner::{default_stretch, Placement, SpannerSequence};
pub use stream::{
    dynamic_stream_run, parse_stream, random_dynamic_stream, validate_stream, write_stream, DynamicRun, StreamEvent,
};
