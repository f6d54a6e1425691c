//! Correlation clustering backends and the sketch-based reduction.

use crate::desparsify::{desparsify_from_sketch, Desparsified, PipelineConfig};
use crate::error::{Error, Result};
use crate::graphcore::{cc_cost, Graph, Partition};
use crate::parallel::{self, Exec};
use crate::sketches::SketchSuite;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Largest n accepted by [`brute_force_cc`].
pub const MAX_BRUTE_FORCE_N: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Pivot,
    BruteForce,
}

impl std::str::FromStr for Backend {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "pivot" => Ok(Backend::Pivot),
            "brute" | "brute_force" | "brute-force" => Ok(Backend::BruteForce),
            other => Err(format!("unknown backend '{other}' (expected pivot|brute)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusteringResult {
    #[serde(skip)]
    pub partition: Partition,
    pub cost: u64,
    pub k: usize,
    pub backend: Backend,
    pub seed: u64,
}

impl ClusteringResult {
    pub(crate) fn new(g: &Graph, partition: Partition, backend: Backend, seed: u64) -> Result<Self> {
        let cost = cc_cost(g, &partition)?;
        Ok(ClusteringResult { k: partition.k(), partition, cost, backend, seed })
    }
}

/// One run of Pivot: visit vertices in random order; each unclustered
/// vertex opens a cluster with its unclustered neighbours.
pub fn pivot_partition<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Partition {
    let n = g.n();
    let adj = g.adjacency();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for &p in &order {
        if label[p] != usize::MAX {
            continue;
        }
        label[p] = next;
        for &v in &adj[p] {
            if label[v] == usize::MAX {
                label[v] = next;
            }
        }
        next += 1;
    }
    Partition::from_labels(&label)
}

pub fn pivot_cc(g: &Graph, seed: u64) -> ClusteringResult {
    let p = pivot_partition(g, &mut ChaCha8Rng::seed_from_u64(seed));
    ClusteringResult::new(g, p, Backend::Pivot, seed).expect("partition covers the graph")
}

/// Pivot over every seed; the cheapest run wins, ties to the earliest seed.
pub fn pivot_best_of(g: &Graph, seeds: &[u64], exec: Exec) -> Result<ClusteringResult> {
    let runs = parallel::map(exec, 0..seeds.len(), |i| pivot_cc(g, seeds[i]));
    runs.into_iter()
        .reduce(|best, r| if r.cost < best.cost { r } else { best })
        .ok_or_else(|| Error::InvalidParameter("at least one seed is required".into()))
}

/// Exact optimum by enumerating restricted-growth strings; n ≤ 9.
pub fn brute_force_cc(g: &Graph) -> Result<ClusteringResult> {
    let n = g.n();
    if n > MAX_BRUTE_FORCE_N {
        return Err(Error::TooLarge { n, limit: MAX_BRUTE_FORCE_N });
    }
    if n == 0 {
        return ClusteringResult::new(g, Partition::from_labels(&[]), Backend::BruteForce, 0);
    }
    let adj = g.adjacency_masks();
    // cost of the labelling: each pair is charged once, at its later vertex
    let pair_cost = |labels: &[usize], v: usize| -> u64 {
        (0..v)
            .map(|u| {
                let edge = adj[v] >> u & 1 == 1;
                let same = labels[u] == labels[v];
                u64::from(edge != same)
            })
            .sum()
    };
    let mut labels = vec![0usize; n];
    let mut best = u64::MAX;
    let mut best_labels = labels.clone();
    // depth-first over restricted-growth strings with partial costs
    fn rec(
        v: usize,
        max_label: usize,
        cost: u64,
        labels: &mut Vec<usize>,
        best: &mut u64,
        best_labels: &mut Vec<usize>,
        pair_cost: &dyn Fn(&[usize], usize) -> u64,
    ) {
        if cost >= *best {
            return;
        }
        if v == labels.len() {
            *best = cost;
            best_labels.clone_from(labels);
            return;
        }
        for l in 0..=max_label + 1 {
            labels[v] = l;
            let c = cost + pair_cost(labels, v);
            rec(v + 1, max_label.max(l), c, labels, best, best_labels, pair_cost);
        }
    }
    rec(1, 0, 0, &mut labels, &mut best, &mut best_labels, &pair_cost);
    ClusteringResult::new(g, Partition::from_labels(&best_labels), Backend::BruteForce, 0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterConfig {
    pub backend: Backend,
    /// Pivot runs are seeded `seed, seed + 1, …, seed + runs − 1`.
    pub runs: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl ClusterConfig {
    pub fn pivot(seed: u64, runs: usize) -> Self {
        ClusterConfig { backend: Backend::Pivot, runs, seed, exec: Exec::default() }
    }
}

pub fn run_backend(g: &Graph, cfg: &ClusterConfig) -> Result<ClusteringResult> {
    match cfg.backend {
        Backend::Pivot => {
            let seeds: Vec<u64> = (0..cfg.runs.max(1) as u64).map(|i| cfg.seed.wrapping_add(i)).collect();
            pivot_best_of(g, &seeds, cfg.exec)
        }
        Backend::BruteForce => brute_force_cc(g),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SketchClustering {
    /// Partition with its cost on G when audited, on G̃ otherwise.
    pub result: ClusteringResult,
    pub cost_on_sparsifier: u64,
    pub audited: bool,
    pub sparsifier: Desparsified,
}

/// Clusters the simple sparsifier recovered from `suite`.
///
/// When `audit` holds the sketched graph, the returned cost is measured on
/// it; otherwise on the recovered graph.
pub fn cluster_from_sketch(
    suite: &SketchSuite,
    pipeline: &PipelineConfig,
    cluster: &ClusterConfig,
    audit: Option<&Graph>,
) -> Result<SketchClustering> {
    let sparsifier = desparsify_from_sketch(suite, pipeline)?;
    let on_sparsifier = run_backend(&sparsifier.graph, cluster)?;
    let result = match audit {
        Some(g) => ClusteringResult::new(g, on_sparsifier.partition.clone(), on_sparsifier.backend, on_sparsifier.seed)?,
        None => on_sparsifier.clone(),
    };
    Ok(SketchClustering { result, cost_on_sparsifier: on_sparsifier.cost, audited: audit.is_some(), sparsifier })
}
