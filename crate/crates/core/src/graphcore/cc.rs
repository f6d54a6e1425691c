use super::{cut_value_mask, Graph, Partition, Weighted};
use crate::error::{Error, Result};

fn check_sizes(n: usize, p: &Partition) -> Result<()> {
    if p.n() != n {
        return Err(Error::SizeMismatch { expected: n, got: p.n() });
    }
    Ok(())
}

/// Correlation clustering cost by direct counting: non-edges inside clusters
/// plus edges between clusters.
pub fn cc_cost(g: &Graph, p: &Partition) -> Result<u64> {
    check_sizes(g.n(), p)?;
    let mut size = vec![0u64; p.k()];
    for v in 0..g.n() {
        size[p.cluster_of(v)] += 1;
    }
    let mut inside_edges = 0u64;
    let mut crossing = 0u64;
    for &(u, v) in g.edges() {
        if p.cluster_of(u) == p.cluster_of(v) {
            inside_edges += 1;
        } else {
            crossing += 1;
        }
    }
    let inside_pairs: u64 = size.iter().map(|&s| s * s.saturating_sub(1) / 2).sum();
    Ok(inside_pairs - inside_edges + crossing)
}

/// Correlation clustering cost through cuts:
/// `Σ_i cut(V_i) + Σ_i C(|V_i|, 2) − ½ Σ_v deg(v)`.
///
/// Equals [`cc_cost`] on simple graphs and is how the objective is extended
/// to weighted graphs.
pub fn cc_via_cuts<G: Weighted>(g: &G, p: &Partition) -> Result<f64> {
    check_sizes(g.n(), p)?;
    let clusters = p.clusters();
    let mut inside = vec![false; g.n()];
    let mut total = 0.0;
    for c in &clusters {
        for &v in c {
            inside[v] = true;
        }
        total += cut_value_mask(g, &inside);
        for &v in c {
            inside[v] = false;
        }
        let s = c.len() as f64;
        total += s * (s - 1.0) / 2.0;
    }
    Ok(total - g.total_weight())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn cc_examples() {
        let two_tri = Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let p = Partition::from_labels(&[0, 0, 0, 1, 1, 1]);
        assert_eq!(cc_cost(&two_tri, &p).unwrap(), 0);
        let tri = Graph::complete(3);
        assert_eq!(cc_cost(&tri, &Partition::singletons(3)).unwrap(), 3);
        assert_eq!(cc_cost(&cycle(5), &Partition::single(5)).unwrap(), 5);
        assert_eq!(cc_via_cuts(&tri, &Partition::singletons(3)).unwrap(), 3.0);
        assert_eq!(cc_via_cuts(&cycle(5), &Partition::single(5)).unwrap(), 5.0);
        assert!(cc_cost(&tri, &Partition::single(4)).is_err());
    }

    #[test]
    fn cc_identity_exhaustive_small() {
        // every graph on 4 vertices × every partition (restricted growth strings)
        let pairs: Vec<(usize, usize)> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect();
        let mut labels = vec![0usize; 4];
        let mut parts = Vec::new();
        fn rgs(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if i == labels.len() {
                out.push(Partition::from_labels(labels));
                return;
            }
            for c in 0..=max + 1 {
                labels[i] = c;
                rgs(i + 1, max.max(c), labels, out);
            }
        }
        labels[0] = 0;
        rgs(1, 0, &mut labels, &mut parts);
        assert_eq!(parts.len(), 15);
        for mask in 0u32..(1 << pairs.len()) {
            let g = Graph::new(4, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e)).unwrap();
            for p in &parts {
                assert_eq!(cc_via_cuts(&g, p).unwrap(), cc_cost(&g, p).unwrap() as f64);
            }
        }
    }
}
