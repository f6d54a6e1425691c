//! Text formats.
//!
//! Edge list: first line `n m`, then `m` lines `u v` (0-indexed). Weighted
//! graphs add a third column `u v w`. Partitions: `n` lines `v cluster_id`.
//! Blank lines and lines starting with `#` are ignored.

use super::{Graph, Partition, WeightedGraph};
use crate::error::{Error, Result};
use std::fmt::Write as _;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse { line, reason: format!("missing {what}") })?;
    tok.parse().map_err(|_| Error::Parse { line, reason: format!("bad {what} '{tok}'") })
}

type RawEdges = (usize, Vec<(usize, usize, Option<f64>)>);

fn parse_edge_lines(text: &str) -> Result<RawEdges> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, reason: "empty input".into() })?;
    let mut it = header.split_whitespace();
    let n: usize = parse_num(it.next(), hl, "vertex count")?;
    let m: usize = parse_num(it.next(), hl, "edge count")?;
    let mut edges = Vec::with_capacity(m);
    for (ln, line) in lines {
        let mut it = line.split_whitespace();
        let u = parse_num(it.next(), ln, "endpoint")?;
        let v = parse_num(it.next(), ln, "endpoint")?;
        let w = match it.next() {
            Some(tok) => Some(parse_num(Some(tok), ln, "weight")?),
            None => None,
        };
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(Error::Parse { line: hl, reason: format!("header says {m} edges, found {}", edges.len()) });
    }
    Ok((n, edges))
}

/// Parses an unweighted edge list. A weight column, if present, must be 1.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let (n, edges) = parse_edge_lines(text)?;
    if let Some(&(_, _, Some(w))) = edges.iter().find(|e| matches!(e.2, Some(w) if w != 1.0)) {
        return Err(Error::InvalidWeight(w));
    }
    Graph::new(n, edges.into_iter().map(|(u, v, _)| (u, v)))
}

/// Parses a weighted edge list; missing weights default to 1.
pub fn parse_weighted(text: &str) -> Result<WeightedGraph> {
    let (n, edges) = parse_edge_lines(text)?;
    WeightedGraph::new(n, edges.into_iter().map(|(u, v, w)| (u, v, w.unwrap_or(1.0))))
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

/// Weights are written with 17 significant digits so they round-trip.
pub fn write_weighted(g: &WeightedGraph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for &(u, v, w) in g.edges() {
        let _ = writeln!(s, "{u} {v} {w:.16e}");
    }
    s
}

pub fn parse_partition(text: &str) -> Result<Partition> {
    let mut pairs = Vec::new();
    for (ln, line) in content_lines(text) {
        let mut it = line.split_whitespace();
        let v: usize = parse_num(it.next(), ln, "vertex")?;
        let c: usize = parse_num(it.next(), ln, "cluster id")?;
        pairs.push((ln, v, c));
    }
    let n = pairs.len();
    let mut labels = vec![usize::MAX; n];
    for (ln, v, c) in pairs {
        if v >= n || labels[v] != usize::MAX {
            return Err(Error::Parse { line: ln, reason: format!("vertex {v} repeated or out of range") });
        }
        labels[v] = c;
    }
    Ok(Partition::from_labels(&labels))
}

pub fn write_partition(p: &Partition) -> String {
    let mut s = String::new();
    for v in 0..p.n() {
        let _ = writeln!(s, "{v} {}", p.cluster_of(v));
    }
    s
}
