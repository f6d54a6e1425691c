use super::{check_vertex, Weighted};
use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Total weight of edges with exactly one endpoint in `s`.
pub fn cut_value<G: Weighted>(g: &G, s: &[usize]) -> Result<f64> {
    let mut inside = vec![false; g.n()];
    for &v in s {
        check_vertex(v, g.n())?;
        inside[v] = true;
    }
    Ok(cut_value_mask(g, &inside))
}

/// [`cut_value`] with the side given as a membership vector.
pub fn cut_value_mask<G: Weighted>(g: &G, inside: &[bool]) -> f64 {
    g.weighted_edges().filter(|&(u, v, _)| inside[u] != inside[v]).map(|(_, _, w)| w).sum()
}

/// Laplacian `D − W` as a dense matrix.
pub fn laplacian<G: Weighted>(g: &G) -> DMatrix<f64> {
    let n = g.n();
    let mut l = DMatrix::zeros(n, n);
    for (u, v, w) in g.weighted_edges() {
        l[(u, u)] += w;
        l[(v, v)] += w;
        l[(u, v)] -= w;
        l[(v, u)] -= w;
    }
    l
}

/// Component label per vertex, labels numbered by smallest vertex.
pub fn component_labels<G: Weighted>(g: &G) -> Vec<usize> {
    let n = g.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (u, v, _) in g.weighted_edges() {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi] = lo;
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut out = vec![0; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        out[v] = label[r];
    }
    out
}

/// Connected components as sorted vertex lists, ordered by smallest vertex.
pub fn components<G: Weighted>(g: &G) -> Vec<Vec<usize>> {
    let labels = component_labels(g);
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut out = vec![Vec::new(); k];
    for (v, &c) in labels.iter().enumerate() {
        out[c].push(v);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinCut {
    pub value: f64,
    /// One side of a minimum cut (sorted). For disconnected graphs, the
    /// component of vertex 0.
    pub side: Vec<usize>,
    pub disconnected: bool,
}

/// Exact global minimum cut (Stoer–Wagner).
///
/// Maximum-adjacency ties go to the smallest vertex id and the first phase
/// achieving the minimum wins, so the returned side is deterministic.
/// Disconnected graphs return value 0 with `disconnected = true`.
pub fn mincut<G: Weighted>(g: &G) -> Result<MinCut> {
    let n = g.n();
    if n < 2 {
        return Err(Error::TooFewVertices { need: 2, got: n });
    }
    let comps = components(g);
    if comps.len() > 1 {
        return Ok(MinCut { value: 0.0, side: comps[0].clone(), disconnected: true });
    }

    let mut w = vec![vec![0.0f64; n]; n];
    for (u, v, wt) in g.weighted_edges() {
        w[u][v] += wt;
        w[v][u] += wt;
    }
    // members[r]: original vertices merged into representative r.
    let mut members: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    let mut best_side = Vec::new();

    while active.len() > 1 {
        let mut added = vec![false; n];
        let mut key = vec![0.0f64; n];
        let mut prev = usize::MAX;
        let mut last = usize::MAX;
        for _ in 0..active.len() {
            // active is kept sorted, so the strict comparison picks the
            // smallest id among ties.
            let mut sel = usize::MAX;
            for &v in &active {
                if !added[v] && (sel == usize::MAX || key[v] > key[sel]) {
                    sel = v;
                }
            }
            added[sel] = true;
            prev = last;
            last = sel;
            for &v in &active {
                if !added[v] {
                    key[v] += w[sel][v];
                }
            }
        }
        let phase = key[last];
        if phase < best {
            best = phase;
            best_side = members[last].clone();
        }
        // merge last into prev
        let moved = std::mem::take(&mut members[last]);
        members[prev].extend(moved);
        for &v in &active {
            if v != last && v != prev {
                w[prev][v] += w[last][v];
                w[v][prev] = w[prev][v];
            }
        }
        active.retain(|&v| v != last);
    }
    best_side.sort_unstable();
    Ok(MinCut { value: best, side: best_side, disconnected: false })
}
