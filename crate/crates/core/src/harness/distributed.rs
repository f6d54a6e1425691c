//! One-round coordinator model and two-round MPC simulation.

use crate::cluster::{cluster_from_sketch, ClusterConfig, SketchClustering};
use crate::desparsify::PipelineConfig;
use crate::error::{Error, Result};
use crate::graphcore::{normalize, Edge, Graph};
use crate::sketches::SketchSuite;
use serde::Serialize;
use std::collections::BTreeMap;

/// Bytes of the broadcast seed.
pub const SEED_BYTES: usize = 8;

/// Union of `parts` as a graph; pairs shared between parts are rejected.
pub fn union_of_parts(n: usize, parts: &[Vec<Edge>]) -> Result<Graph> {
    let mut owner: BTreeMap<Edge, usize> = BTreeMap::new();
    for (i, part) in parts.iter().enumerate() {
        for &(u, v) in part {
            let e = normalize(u, v);
            if owner.insert(e, i).is_some() {
                return Err(Error::OverlappingPartitions(e.0, e.1));
            }
        }
    }
    Graph::new(n, owner.into_keys())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommReport {
    pub machines: usize,
    pub seed_bytes_per_machine: usize,
    /// Serialized suite uploaded by each machine.
    pub upload_bytes: Vec<usize>,
    pub total_bytes: usize,
    pub max_upload_bytes: usize,
    /// Merged suite equals the suite of the union built in one place.
    pub matches_offline: bool,
}

#[derive(Debug, Clone)]
pub struct DistributedRun {
    pub suite: SketchSuite,
    pub clustering: SketchClustering,
    pub comm: CommReport,
}

/// Coordinator model: the seed is broadcast, each machine sketches its edge
/// set and uploads the bytes, the coordinator decodes, sums and clusters.
pub fn distributed_run(
    n: usize,
    parts: &[Vec<Edge>],
    pipeline: &PipelineConfig,
    cluster: &ClusterConfig,
) -> Result<DistributedRun> {
    let union = union_of_parts(n, parts)?;
    let mut merged = SketchSuite::for_profile(pipeline.seed, n, pipeline.eps, &pipeline.profile)?;
    let mut upload_bytes = Vec::with_capacity(parts.len());
    for part in parts {
        let local = Graph::new(n, part.iter().map(|&(u, v)| normalize(u, v)))?;
        let mut suite = merged.cleared();
        suite.insert_graph(&local);
        let bytes = suite.to_bytes();
        upload_bytes.push(bytes.len());
        merged.merge_from(&SketchSuite::from_bytes(&bytes)?)?;
    }
    let offline = SketchSuite::of_graph(&union, pipeline.seed, pipeline.eps, &pipeline.profile)?;
    let comm = CommReport {
        machines: parts.len(),
        seed_bytes_per_machine: SEED_BYTES,
        total_bytes: upload_bytes.iter().sum::<usize>() + SEED_BYTES * parts.len(),
        max_upload_bytes: upload_bytes.iter().copied().max().unwrap_or(0),
        upload_bytes,
        matches_offline: offline.to_bytes() == merged.to_bytes(),
    };
    let clustering = cluster_from_sketch(&merged, pipeline, cluster, Some(&union))?;
    Ok(DistributedRun { suite: merged, clustering, comm })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MpcReport {
    pub machines: usize,
    pub rounds: usize,
    /// Per-machine, per-round byte cap.
    pub cap: usize,
    /// Indexed `[round][machine]`.
    pub sent: Vec<Vec<usize>>,
    pub received: Vec<Vec<usize>>,
    pub messages: usize,
    pub matches_offline: bool,
}

#[derive(Debug, Clone)]
pub struct MpcRun {
    pub suite: SketchSuite,
    pub clustering: SketchClustering,
    pub report: MpcReport,
}

/// Largest single vertex slice for these parameters.
pub fn max_slice_bytes(template: &SketchSuite) -> usize {
    template.vertex_slice(0).len()
}

/// Default cap: n + k slices of maximal size, i.e. Õ(n) bytes.
pub fn default_mpc_cap(template: &SketchSuite, machines: usize) -> usize {
    (template.n() + machines) * max_slice_bytes(template)
}

fn check_cap(loads: &[usize], cap: usize) -> Result<()> {
    match loads.iter().enumerate().find(|(_, &b)| b > cap) {
        Some((machine, &bytes)) => Err(Error::MessageCapExceeded { machine, bytes, cap }),
        None => Ok(()),
    }
}

/// Two rounds: machines send each nonzero vertex slice to owner v mod k,
/// owners forward their aggregated slices to machine 0, which recovers.
pub fn mpc_run(
    n: usize,
    parts: &[Vec<Edge>],
    pipeline: &PipelineConfig,
    cluster: &ClusterConfig,
    cap: Option<usize>,
) -> Result<MpcRun> {
    let k = parts.len();
    if k == 0 {
        return Err(Error::InvalidParameter("at least one machine is required".into()));
    }
    let union = union_of_parts(n, parts)?;
    let template = SketchSuite::for_profile(pipeline.seed, n, pipeline.eps, &pipeline.profile)?;
    let cap = cap.unwrap_or_else(|| default_mpc_cap(&template, k));
    let mut sent = vec![vec![0usize; k]; 2];
    let mut received = vec![vec![0usize; k]; 2];
    let mut messages = 0;

    let mut owners: Vec<SketchSuite> = (0..k).map(|_| template.clone()).collect();
    for (j, part) in parts.iter().enumerate() {
        let mut local = template.clone();
        local.insert_graph(&Graph::new(n, part.iter().map(|&(u, v)| normalize(u, v)))?);
        for v in local.touched_vertices() {
            let slice = local.vertex_slice(v);
            let owner = v % k;
            sent[0][j] += slice.len();
            received[0][owner] += slice.len();
            messages += 1;
            owners[owner].add_vertex_slice(&slice)?;
        }
    }
    check_cap(&sent[0], cap)?;
    check_cap(&received[0], cap)?;

    let mut assembled = template.clone();
    for (j, owned) in owners.iter().enumerate() {
        for v in owned.touched_vertices().into_iter().filter(|v| v % k == j) {
            let slice = owned.vertex_slice(v);
            sent[1][j] += slice.len();
            received[1][0] += slice.len();
            messages += 1;
            assembled.add_vertex_slice(&slice)?;
        }
    }
    check_cap(&sent[1], cap)?;
    check_cap(&received[1], cap)?;

    let offline = SketchSuite::of_graph(&union, pipeline.seed, pipeline.eps, &pipeline.profile)?;
    let report = MpcReport {
        machines: k,
        rounds: 2,
        cap,
        sent,
        received,
        messages,
        matches_offline: offline.to_bytes() == assembled.to_bytes(),
    };
    let clustering = cluster_from_sketch(&assembled, pipeline, cluster, Some(&union))?;
    Ok(MpcRun { suite: assembled, clustering, report })
}
