//! End-to-end de-sparsification pipelines.

use super::ellipsoid::{solve, Termination};
use super::program::{pairs_within_components, FractionalGraph, ProgramSpec};
use super::rounding::{default_max_attempts, round_exact_weight};
use crate::error::{Error, Result};
use crate::graphcore::{components, mincut, normalize, Edge, Graph, WeightedGraph};
use crate::parallel::Exec;
use crate::profile::Profile;
use crate::sketches::{recover_spectral, recover_weak_edges, SketchSuite};
use crate::spectral::resistance_matrix;
use serde::Serialize;

/// Band multiplier of the composed guarantees: outputs are checked at 5ε.
pub const COMPOSED_BAND: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub eps: f64,
    /// Seed of the rounding attempts.
    pub seed: u64,
    pub profile: Profile,
    pub max_attempts: Option<u64>,
    pub max_iters: Option<u64>,
    pub exec: Exec,
}

impl PipelineConfig {
    pub fn new(eps: f64, seed: u64) -> Self {
        PipelineConfig { eps, seed, profile: Profile::default(), max_attempts: None, max_iters: None, exec: Exec::default() }
    }

    pub fn with_profile(mut self, profile: Profile) -> Self {
        self.profile = profile;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentStats {
    pub size: usize,
    pub output_edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub lambda: Option<f64>,
    /// |T| for the cut pipeline, |H̃_U| for the spectral sketch pipeline.
    pub fixed_edges: usize,
    pub k: usize,
    pub components: Vec<ComponentStats>,
    pub support_size: usize,
    pub ellipsoid_iterations: u64,
    pub termination: Termination,
    pub rounding_attempts: u64,
    /// Verification band declared for the output (multiple of ε).
    pub band: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Desparsified {
    pub graph: Graph,
    pub fractional: FractionalGraph,
    /// Edges kept with probability 1 (T or H̃_U); disjoint from the rounded part.
    pub fixed: Vec<Edge>,
    pub provenance: Provenance,
}

struct Solved {
    graph: Graph,
    fractional: FractionalGraph,
    iterations: u64,
    termination: Termination,
    attempts: u64,
}

fn solve_and_round(spec: &ProgramSpec, m: usize, cfg: &PipelineConfig) -> Result<Solved> {
    let (fractional, report) = solve(spec, cfg.max_iters)?;
    let max_attempts = cfg.max_attempts.unwrap_or_else(|| default_max_attempts(spec.n));
    let rounded = round_exact_weight(&fractional, m, cfg.seed, max_attempts, cfg.exec)?;
    Ok(Solved {
        graph: rounded.graph,
        fractional,
        iterations: report.iterations,
        termination: report.termination,
        attempts: rounded.attempts,
    })
}

fn component_stats(comps: &[Vec<usize>], g: &Graph) -> Vec<ComponentStats> {
    let mut label = vec![0; g.n()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            label[v] = i;
        }
    }
    let mut counts = vec![0; comps.len()];
    for &(u, v) in g.edges() {
        if label[u] == label[v] {
            counts[label[u]] += 1;
        }
    }
    comps.iter().zip(counts).map(|(c, e)| ComponentStats { size: c.len(), output_edges: e }).collect()
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 1), got {eps}")));
    }
    Ok(())
}

fn mincut_warnings(h: &WeightedGraph, comps: &[Vec<usize>], threshold: f64) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for comp in comps.iter().filter(|c| c.len() >= 2) {
        let local: Vec<(usize, usize, f64)> = h
            .edges()
            .iter()
            .filter_map(|&(u, v, w)| {
                let a = comp.binary_search(&u).ok()?;
                let b = comp.binary_search(&v).ok()?;
                Some((a.min(b), a.max(b), w))
            })
            .collect();
        let value = mincut(&WeightedGraph::new(comp.len(), local)?)?.value;
        if value < threshold {
            out.push(format!(
                "component of size {} has mincut {value:.3} below the rounding threshold {threshold:.3}",
                comp.len()
            ));
        }
    }
    Ok(out)
}

/// Simple m-edge graph whose cuts track those of `h`.
///
/// `h` should be a (1 ± ε) sparsifier of a simple m-edge graph; the output
/// is a total-weight-preserving (1 ± 5ε) cut sparsifier of that graph when
/// the mincut precondition holds (a warning is recorded otherwise).
pub fn desparsify_cut(h: &WeightedGraph, m: usize, cfg: &PipelineConfig) -> Result<Desparsified> {
    check_eps(cfg.eps)?;
    let comps = components(h);
    let warnings = mincut_warnings(h, &comps, cfg.profile.round_threshold(h.n(), cfg.eps))?;
    for w in &warnings {
        log::warn!("{w}");
    }
    let spec = ProgramSpec::plain(h, m, pairs_within_components(h, &[]), cfg.eps)?;
    let solved = solve_and_round(&spec, m, cfg)?;
    Ok(Desparsified {
        provenance: Provenance {
            lambda: None,
            fixed_edges: 0,
            k: comps.len(),
            components: component_stats(&comps, &solved.graph),
            support_size: spec.d(),
            ellipsoid_iterations: solved.iterations,
            termination: solved.termination,
            rounding_attempts: solved.attempts,
            band: COMPOSED_BAND * cfg.eps,
            warnings,
        },
        graph: solved.graph,
        fractional: solved.fractional,
        fixed: Vec::new(),
    })
}

/// Largest effective resistance between two vertices of the same component.
pub fn max_pair_resistance(h: &WeightedGraph) -> Result<f64> {
    let r = resistance_matrix(h)?;
    Ok(r.iter().copied().filter(|x| x.is_finite()).fold(0.0, f64::max))
}

/// Simple m-edge graph spectrally close to `h`.
///
/// Needs every same-component pair to have R_eff ≤ ε²/(2C·ln n) in the
/// hidden graph; this is checked on `h` and a warning recorded when it fails.
pub fn desparsify_spectral(h: &WeightedGraph, m: usize, cfg: &PipelineConfig) -> Result<Desparsified> {
    check_eps(cfg.eps)?;
    let comps = components(h);
    let mut warnings = Vec::new();
    let threshold = cfg.profile.max_er_threshold(h.n(), cfg.eps);
    let worst = max_pair_resistance(h)?;
    if worst > threshold {
        let w = format!("max pair effective resistance {worst:.4} exceeds {threshold:.4}; spectral guarantee void");
        log::warn!("{w}");
        warnings.push(w);
    }
    let spec = ProgramSpec::plain(h, m, pairs_within_components(h, &[]), cfg.eps)?;
    let solved = solve_and_round(&spec, m, cfg)?;
    Ok(Desparsified {
        provenance: Provenance {
            lambda: None,
            fixed_edges: 0,
            k: comps.len(),
            components: component_stats(&comps, &solved.graph),
            support_size: spec.d(),
            ellipsoid_iterations: solved.iterations,
            termination: solved.termination,
            rounding_attempts: solved.attempts,
            band: COMPOSED_BAND * cfg.eps,
            warnings,
        },
        graph: solved.graph,
        fractional: solved.fractional,
        fixed: Vec::new(),
    })
}

fn sketched_m(suite: &SketchSuite) -> Result<usize> {
    usize::try_from(suite.edge_count())
        .map_err(|_| Error::SketchMismatch(format!("negative edge count {}", suite.edge_count())))
}

/// Cut de-sparsification from sketches alone.
///
/// Recovers the weak edges T, a spectral sparsifier H̃ of G − T and m; solves
/// one program over the pairs inside the components of H̃ with total
/// m − |T|, rounds, and adds T back. T crosses those components, so the
/// union has no repeated edge.
pub fn desparsify_from_sketch(suite: &SketchSuite, cfg: &PipelineConfig) -> Result<Desparsified> {
    check_eps(cfg.eps)?;
    let n = suite.n();
    let m = sketched_m(suite)?;
    let lambda = suite.lambda();
    let weak = recover_weak_edges(suite.s1(), lambda)?.edges;
    let h = recover_spectral(suite.s2(), suite.seed(), &weak)?;
    let rest = m
        .checked_sub(weak.len())
        .ok_or_else(|| Error::SketchRecoveryFailure(format!("{} weak edges exceed m = {m}", weak.len())))?;
    let comps = components(&h);
    let support = pairs_within_components(&h, &[]);
    let crossing: Vec<Edge> = {
        let mut s = support.clone();
        s.sort_unstable();
        weak.iter().copied().filter(|e| s.binary_search(e).is_ok()).collect()
    };
    if let Some(&(u, v)) = crossing.first() {
        return Err(Error::SketchRecoveryFailure(format!(
            "weak edge ({u}, {v}) lies inside a component of the recovered sparsifier"
        )));
    }
    let warnings = mincut_warnings(&h, &comps, cfg.profile.round_threshold(n, cfg.eps))?;
    let spec = ProgramSpec::plain(&h, rest, support, cfg.eps)?;
    let solved = solve_and_round(&spec, rest, cfg)?;
    let t_graph = Graph::new(n, weak.iter().copied())?;
    let graph = solved.graph.union(&t_graph).map_err(|e| match e {
        Error::DuplicateEdge(u, v) => {
            Error::SketchRecoveryFailure(format!("rounded edge ({u}, {v}) duplicates a weak edge"))
        }
        other => other,
    })?;
    Ok(Desparsified {
        provenance: Provenance {
            lambda: Some(lambda),
            fixed_edges: weak.len(),
            k: comps.len(),
            components: component_stats(&comps, &graph),
            support_size: spec.d(),
            ellipsoid_iterations: solved.iterations,
            termination: solved.termination,
            rounding_attempts: solved.attempts,
            band: COMPOSED_BAND * cfg.eps,
            warnings,
        },
        graph,
        fractional: solved.fractional,
        fixed: weak,
    })
}

/// Candidate pairs for the offset program: same component of `h`, not in
/// `exclude`, effective resistance in `h` at most `threshold`.
pub fn small_resistance_pairs(h: &WeightedGraph, exclude: &[Edge], threshold: f64) -> Result<Vec<Edge>> {
    if h.m() == 0 {
        return Ok(Vec::new());
    }
    let r = resistance_matrix(h)?;
    let mut skip: Vec<Edge> = exclude.iter().map(|&(u, v)| normalize(u, v)).collect();
    skip.sort_unstable();
    Ok(pairs_within_components(h, &skip).into_iter().filter(|&(u, v)| r[(u, v)] <= threshold).collect())
}

/// Spectral de-sparsification from sketches.
///
/// Keeps the unweighted support H̃_U of the recovered sparsifier, solves for
/// the remaining m − |H̃_U| units of weight on the small-resistance pairs Ê
/// with L_{H̃_U} as a fixed offset, and rounds only that fractional part.
pub fn desparsify_spectral_from_sketch(suite: &SketchSuite, cfg: &PipelineConfig) -> Result<Desparsified> {
    check_eps(cfg.eps)?;
    let n = suite.n();
    let m = sketched_m(suite)?;
    let h = recover_spectral(suite.s2(), suite.seed(), &[])?;
    let kept = h.support();
    let rest = m
        .checked_sub(kept.m())
        .ok_or_else(|| Error::SketchRecoveryFailure(format!("{} recovered edges exceed m = {m}", kept.m())))?;
    let candidates = small_resistance_pairs(&h, kept.edges(), cfg.profile.ehat_threshold(n, cfg.eps))?;
    let comps = components(&h);
    let spec = ProgramSpec::new(h.clone(), WeightedGraph::from_graph(&kept), candidates, rest as f64, cfg.eps)?;
    let solved = solve_and_round(&spec, rest, cfg)?;
    let graph = solved.graph.union(&kept)?;
    Ok(Desparsified {
        provenance: Provenance {
            lambda: None,
            fixed_edges: kept.m(),
            k: comps.len(),
            components: component_stats(&comps, &graph),
            support_size: spec.d(),
            ellipsoid_iterations: solved.iterations,
            termination: solved.termination,
            rounding_attempts: solved.attempts,
            band: COMPOSED_BAND * cfg.eps,
            warnings: Vec::new(),
        },
        graph,
        fractional: solved.fractional,
        fixed: kept.edges().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{is_cut_sparsifier_bruteforce, is_spectral_sparsifier};

    fn tree() -> Graph {
        Graph::new(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]).unwrap()
    }

    #[test]
    fn cut_on_complete_graph() {
        let g = Graph::complete(10);
        let out = desparsify_cut(&WeightedGraph::from_graph(&g), 45, &PipelineConfig::new(0.3, 1)).unwrap();
        assert_eq!(out.graph.m(), 45);
        assert!(is_cut_sparsifier_bruteforce(&out.graph, &g, 1.5).unwrap().ok);
    }

    #[test]
    fn mismatched_m_infeasible() {
        let g = Graph::complete(6);
        let err = desparsify_cut(&WeightedGraph::from_graph(&g), 16, &PipelineConfig::new(0.3, 1)).unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)), "{err:?}");
    }

    #[test]
    fn spectral_warns_on_path() {
        let p = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let out = desparsify_spectral(&WeightedGraph::from_graph(&p), 4, &PipelineConfig::new(0.3, 2)).unwrap();
        assert!(!out.provenance.warnings.is_empty());
        assert_eq!(out.graph, p);
    }

    #[test]
    fn sketch_tree_is_all_weak() {
        let g = tree();
        let suite = SketchSuite::of_graph(&g, 4, 0.3, &Profile::DESK).unwrap();
        let out = desparsify_from_sketch(&suite, &PipelineConfig::new(0.3, 4)).unwrap();
        assert_eq!(out.graph, g);
        assert_eq!(out.fixed.len(), 6);
    }

    #[test]
    fn sketch_empty_graph() {
        let suite = SketchSuite::for_profile(1, 5, 0.3, &Profile::DESK).unwrap();
        let cfg = PipelineConfig::new(0.3, 1);
        assert_eq!(desparsify_from_sketch(&suite, &cfg).unwrap().graph.m(), 0);
        assert_eq!(desparsify_spectral_from_sketch(&suite, &cfg).unwrap().graph.m(), 0);
    }

    #[test]
    fn spectral_sketch_keeps_bridges() {
        let mut edges = Vec::new();
        for base in [0, 6] {
            for i in 0..6 {
                for j in i + 1..6 {
                    edges.push((base + i, base + j));
                }
            }
        }
        edges.push((5, 6));
        let g = Graph::new(12, edges).unwrap();
        let suite = SketchSuite::of_graph(&g, 2, 0.4, &Profile::DESK).unwrap();
        let out = desparsify_spectral_from_sketch(&suite, &PipelineConfig::new(0.4, 2)).unwrap();
        assert!(out.graph.has_edge(5, 6));
        assert_eq!(out.graph.m(), g.m());
        assert!(is_spectral_sparsifier(&out.graph, &g, 2.0).unwrap().ok);
    }
}
