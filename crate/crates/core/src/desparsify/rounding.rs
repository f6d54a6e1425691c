//! Independent rounding of fractional graphs.

use super::program::FractionalGraph;
use crate::error::{Error, Result};
use crate::graphcore::Graph;
use crate::parallel::{self, Exec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Attempts evaluated per parallel batch.
const BATCH: usize = 64;

/// Keeps each support pair independently with probability y_e.
pub fn round_bernoulli<R: Rng + ?Sized>(f: &FractionalGraph, rng: &mut R) -> Graph {
    let edges: Vec<_> = f
        .support()
        .iter()
        .zip(f.y())
        .filter(|(_, &p)| p >= 1.0 || (p > 0.0 && rng.gen::<f64>() < p))
        .map(|(&e, _)| e)
        .collect();
    Graph::new(f.n(), edges).expect("support is a valid simple edge set")
}

/// Rng of one rounding attempt: stream `attempt` of ChaCha8 keyed by `seed`.
pub fn attempt_rng(seed: u64, attempt: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt);
    rng
}

/// min(n³, 10⁶).
pub fn default_max_attempts(n: usize) -> u64 {
    (n as u64).saturating_pow(3).clamp(1, 1_000_000)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rounded {
    pub graph: Graph,
    /// 1-based index of the successful attempt.
    pub attempts: u64,
}

/// Repeats [`round_bernoulli`] until exactly `target_m` edges are kept.
///
/// Attempt i draws from [`attempt_rng`]`(seed, i)` and the lowest
/// successful index wins, so the result does not depend on `exec`.
pub fn round_exact_weight(
    f: &FractionalGraph,
    target_m: usize,
    seed: u64,
    max_attempts: u64,
    exec: Exec,
) -> Result<Rounded> {
    let sum = f.sum();
    if (sum - target_m as f64).abs() > 1e-9 * (target_m as f64).max(1.0) {
        return Err(Error::InvalidParameter(format!("fractional total {sum} differs from target {target_m}")));
    }
    let mut start = 0u64;
    while start < max_attempts {
        let len = (max_attempts - start).min(BATCH as u64) as usize;
        let hit = parallel::find_first(exec, 0..len, |i| {
            let g = round_bernoulli(f, &mut attempt_rng(seed, start + i as u64));
            (g.m() == target_m).then_some(g)
        });
        if let Some((i, graph)) = hit {
            return Ok(Rounded { graph, attempts: start + i as u64 + 1 });
        }
        start += len as u64;
    }
    Err(Error::RoundingExhausted { target: target_m, attempts: max_attempts })
}
