//! Deterministic insertion-only pipeline.

use super::det_sparsifier::DeterministicSparsifier;
use super::spanner::{default_stretch, Placement, SpannerSequence};
use super::stream::StreamEvent;
use crate::cluster::{run_backend, ClusterConfig, ClusteringResult};
use crate::desparsify::{
    default_max_attempts, round_exact_weight, small_resistance_pairs, solve, FractionalGraph, PipelineConfig,
    ProgramSpec, Termination,
};
use crate::error::{Error, Result};
use crate::graphcore::{normalize, Edge, Graph, WeightedGraph};
use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use std::collections::BTreeSet;

/// Internal error parameter is ε divided by this.
pub const REPARAMETERIZATION: f64 = 5.0;

/// Random source that panics on any draw before [`release`](Self::release).
#[derive(Debug, Clone)]
pub struct GuardedRng {
    inner: ChaCha8Rng,
    released: bool,
    draws: u64,
}

impl GuardedRng {
    pub fn new(seed: u64) -> Self {
        GuardedRng { inner: ChaCha8Rng::seed_from_u64(seed), released: false, draws: 0 }
    }

    pub fn release(&mut self) {
        self.released = true;
    }

    pub fn is_released(&self) -> bool {
        self.released
    }

    /// Draws made after release.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    fn guard(&mut self) {
        assert!(self.released, "random draw before the end of the stream");
        self.draws += 1;
    }
}

impl RngCore for GuardedRng {
    fn next_u32(&mut self) -> u32 {
        self.guard();
        self.inner.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.guard();
        self.inner.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.guard();
        self.inner.fill_bytes(dest)
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.guard();
        self.inner.try_fill_bytes(dest)
    }
}

/// Everything kept during the stream.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterministicState {
    pub spanners: SpannerSequence,
    pub det_sparsifier: DeterministicSparsifier,
    pub leftover_count: usize,
    pub m: usize,
}

impl DeterministicState {
    /// ℓ = spanner_count(n, ε/5) spanners of stretch ⌈log₂ n⌉; the leftover
    /// sparsifier gets half the internal budget.
    pub fn new(n: usize, eps: f64, cfg: &PipelineConfig) -> Self {
        let inner = eps / REPARAMETERIZATION;
        DeterministicState {
            spanners: SpannerSequence::new(n, cfg.profile.spanner_count(n, inner), default_stretch(n)),
            det_sparsifier: DeterministicSparsifier::new(n, inner / 2.0),
            leftover_count: 0,
            m: 0,
        }
    }

    /// The stream update. Takes the rng only to prove it is never used.
    pub fn insert(&mut self, u: usize, v: usize, _rng: &mut GuardedRng) -> Result<Placement> {
        let placement = self.spanners.insert(u, v)?;
        if placement == Placement::Overflow {
            self.det_sparsifier.push(normalize(u, v))?;
            self.leftover_count += 1;
        }
        self.m += 1;
        Ok(placement)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let s = &self.spanners;
        let mut out = b"DSIO".to_vec();
        for x in [s.n(), s.count(), s.stretch()] {
            out.extend_from_slice(&(x as u64).to_le_bytes());
        }
        for i in 0..s.count() {
            out.extend_from_slice(&(s.spanner(i).len() as u64).to_le_bytes());
            for &(u, v) in s.spanner(i) {
                out.extend_from_slice(&(u as u64).to_le_bytes());
                out.extend_from_slice(&(v as u64).to_le_bytes());
            }
        }
        self.det_sparsifier.write_state(&mut out);
        out.extend_from_slice(&(self.leftover_count as u64).to_le_bytes());
        out.extend_from_slice(&(self.m as u64).to_le_bytes());
        out
    }

    /// Lowercase hex SHA-256 of [`to_bytes`](Self::to_bytes).
    pub fn digest(&self) -> String {
        format!("{:x}", Sha256::digest(self.to_bytes()))
    }
}

#[derive(Debug, Clone)]
pub struct InsertionRun {
    pub graph: Graph,
    pub state: DeterministicState,
    pub digest: String,
    /// D + ∪T_i, the program's right-hand side.
    pub target: WeightedGraph,
    pub candidates: Vec<Edge>,
    pub fractional: FractionalGraph,
    pub ellipsoid_iterations: u64,
    pub termination: Termination,
    pub rounding_attempts: u64,
    /// Declared spectral band of `graph` against the streamed graph.
    pub band: f64,
    /// Clustering of `graph`, cost measured on the streamed graph.
    pub clustering: ClusteringResult,
}

/// Single pass with no randomness, then recovery: Ê are the non-spanner
/// pairs of resistance ≤ log₂(n)/ℓ in ∪T_i; the program with offset ∪T_i
/// and total m − Σ|T_i| against D + ∪T_i is solved at ε/5 and rounded with
/// a seed drawn from `rng` once the stream has ended.
pub fn insertion_only_run(
    n: usize,
    events: &[StreamEvent],
    pipeline: &PipelineConfig,
    cluster: &ClusterConfig,
    rng: &mut GuardedRng,
) -> Result<InsertionRun> {
    let eps = pipeline.eps;
    let mut state = DeterministicState::new(n, eps, pipeline);
    let mut seen: BTreeSet<Edge> = BTreeSet::new();
    for (position, ev) in events.iter().enumerate() {
        if ev.sign != 1 {
            return Err(Error::InvalidStream { position, reason: "deletions are not allowed".into() });
        }
        state.insert(ev.u, ev.v, rng).map_err(|e| Error::InvalidStream { position, reason: e.to_string() })?;
        seen.insert(normalize(ev.u, ev.v));
    }
    let streamed = Graph::new(n, seen)?;
    let digest = state.digest();

    rng.release();
    let seed = rng.next_u64();
    let inner = eps / REPARAMETERIZATION;
    let union = state.spanners.union();
    let offset = WeightedGraph::from_graph(&union);
    let target = state.det_sparsifier.current()?.plus(&offset)?;
    let ell = state.spanners.count() as f64;
    let threshold = (n.max(2) as f64).log2() / ell + 1e-9;
    let candidates = small_resistance_pairs(&offset, union.edges(), threshold)?;
    let rest = state.m - union.m();
    let spec = ProgramSpec::new(target.clone(), offset, candidates.clone(), rest as f64, inner)?;
    let (fractional, report) = solve(&spec, pipeline.max_iters)?;
    let max_attempts = pipeline.max_attempts.unwrap_or_else(|| default_max_attempts(n));
    let rounded = round_exact_weight(&fractional, rest, seed, max_attempts, pipeline.exec)?;
    let graph = rounded.graph.union(&union)?;
    let on_output = run_backend(&graph, cluster)?;
    let clustering = ClusteringResult::new(&streamed, on_output.partition, on_output.backend, on_output.seed)?;
    Ok(InsertionRun {
        graph,
        state,
        digest,
        target,
        candidates,
        fractional,
        ellipsoid_iterations: report.iterations,
        termination: report.termination,
        rounding_attempts: rounded.attempts,
        band: eps,
        clustering,
    })
}
