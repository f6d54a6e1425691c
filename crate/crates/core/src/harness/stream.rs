//! Dynamic graph streams.

use crate::cluster::{cluster_from_sketch, ClusterConfig, SketchClustering};
use crate::desparsify::PipelineConfig;
use crate::error::{Error, Result};
use crate::graphcore::{check_vertex, normalize, Edge, Graph};
use crate::sketches::SketchSuite;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StreamEvent {
    pub u: usize,
    pub v: usize,
    /// +1 insert, −1 delete.
    pub sign: i64,
}

impl StreamEvent {
    pub fn insert(u: usize, v: usize) -> Self {
        StreamEvent { u, v, sign: 1 }
    }
    pub fn delete(u: usize, v: usize) -> Self {
        StreamEvent { u, v, sign: -1 }
    }
}

/// Net graph of a stream; rejects double inserts, deletes of absent edges,
/// self-loops and out-of-range vertices, reporting the event position.
pub fn validate_stream(n: usize, events: &[StreamEvent]) -> Result<Graph> {
    let mut live: BTreeSet<Edge> = BTreeSet::new();
    for (position, ev) in events.iter().enumerate() {
        let bad = |reason: String| Error::InvalidStream { position, reason };
        check_vertex(ev.u, n).map_err(|e| bad(e.to_string()))?;
        check_vertex(ev.v, n).map_err(|e| bad(e.to_string()))?;
        if ev.u == ev.v {
            return Err(bad(format!("self-loop on {}", ev.u)));
        }
        let e = normalize(ev.u, ev.v);
        match ev.sign {
            1 if !live.insert(e) => return Err(bad(format!("edge {e:?} inserted twice"))),
            -1 if !live.remove(&e) => return Err(bad(format!("edge {e:?} deleted while absent"))),
            1 | -1 => {}
            s => return Err(bad(format!("sign must be +1 or -1, got {s}"))),
        }
    }
    Graph::new(n, live)
}

/// Valid stream whose net graph is `g`: the edges of `g` plus `churn`
/// random non-edges are inserted in random order, and the extra edges are
/// deleted again (each after its insertion).
pub fn random_dynamic_stream<R: Rng + ?Sized>(g: &Graph, churn: usize, rng: &mut R) -> Vec<StreamEvent> {
    let n = g.n();
    let mut extra: BTreeSet<Edge> = BTreeSet::new();
    let non_edges = crate::graphcore::pair_count(n) - g.m();
    let want = churn.min(non_edges);
    while extra.len() < want {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && !g.has_edge(u, v) {
            extra.insert(normalize(u, v));
        }
    }
    let mut events: Vec<StreamEvent> = g.edges().iter().map(|&(u, v)| StreamEvent::insert(u, v)).collect();
    events.extend(extra.iter().map(|&(u, v)| StreamEvent::insert(u, v)));
    events.shuffle(rng);
    for &(u, v) in &extra {
        let pos = events.iter().position(|e| normalize(e.u, e.v) == (u, v) && e.sign == 1).expect("inserted");
        let at = rng.gen_range(pos + 1..=events.len());
        let (a, b) = if rng.gen_bool(0.5) { (u, v) } else { (v, u) };
        events.insert(at, StreamEvent::delete(a, b));
    }
    events
}

pub fn parse_stream(text: &str) -> Result<Vec<StreamEvent>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |reason: &str| Error::Parse { line: i + 1, reason: reason.to_string() };
        let mut it = line.split_whitespace();
        let u = it.next().and_then(|t| t.parse().ok()).ok_or_else(|| parse_err("expected vertex u"))?;
        let v = it.next().and_then(|t| t.parse().ok()).ok_or_else(|| parse_err("expected vertex v"))?;
        let sign = match it.next() {
            Some("+") => 1,
            Some("-") | Some("\u{2212}") => -1,
            _ => return Err(parse_err("expected '+' or '-'")),
        };
        if it.next().is_some() {
            return Err(parse_err("trailing tokens"));
        }
        out.push(StreamEvent { u, v, sign });
    }
    Ok(out)
}

pub fn write_stream(events: &[StreamEvent]) -> String {
    events.iter().map(|e| format!("{} {} {}\n", e.u, e.v, if e.sign > 0 { '+' } else { '-' })).collect()
}

#[derive(Debug, Clone)]
pub struct DynamicRun {
    pub suite: SketchSuite,
    pub clustering: SketchClustering,
    /// Suite bytes equal those of the net graph inserted in sorted order.
    pub matches_offline: bool,
    pub events: usize,
}

/// One pass over the stream maintaining only the sketch suite; recovery and
/// clustering run after the last event. The net graph is tracked separately
/// for validation and auditing.
pub fn dynamic_stream_run(
    n: usize,
    events: &[StreamEvent],
    pipeline: &PipelineConfig,
    cluster: &ClusterConfig,
) -> Result<DynamicRun> {
    let net = validate_stream(n, events)?;
    let mut suite = SketchSuite::for_profile(pipeline.seed, n, pipeline.eps, &pipeline.profile)?;
    for ev in events {
        suite.update(ev.u, ev.v, ev.sign)?;
    }
    let offline = SketchSuite::of_graph(&net, pipeline.seed, pipeline.eps, &pipeline.profile)?;
    let matches_offline = offline.to_bytes() == suite.to_bytes();
    let clustering = cluster_from_sketch(&suite, pipeline, cluster, Some(&net))?;
    Ok(DynamicRun { suite, clustering, matches_offline, events: events.len() })
}
