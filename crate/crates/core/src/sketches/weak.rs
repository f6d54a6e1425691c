//! S1: per-vertex banks of ℓ0-samplers over signed incidence vectors, and
//! weak-edge recovery by repeated Borůvka forest peeling.

use super::hash::{add_signed, keyed, keyed2, mod_p};
use crate::error::{Error, Result};
use crate::graphcore::{components, mincut, pair_count, pair_from_index, pair_index, Edge, Graph};

/// Independent sampler repetitions per (forest, round).
pub const REPS: usize = 4;

/// One level of an ℓ0-sampler: Σx, Σi·x and Σx·h(i) mod 2^61−1.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct Cell {
    pub a: i64,
    pub b: i64,
    pub c: u64,
}

impl Cell {
    fn add(&mut self, other: &Cell) {
        self.a = self.a.wrapping_add(other.a);
        self.b = self.b.wrapping_add(other.b);
        self.c = mod_p(self.c + other.c);
    }

    fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0 && self.c == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeakLayout {
    pub forests: usize,
    /// Borůvka rounds per forest; one extra bank per forest checks
    /// that the forest is spanning.
    pub rounds: usize,
    pub reps: usize,
    pub levels: usize,
}

impl WeakLayout {
    pub fn new(n: usize, lambda: f64) -> Self {
        let log_n = (usize::BITS - n.max(1).saturating_sub(1).leading_zeros()) as usize;
        let pairs = pair_count(n).max(1);
        let log_pairs = (usize::BITS - (pairs - 1).leading_zeros()) as usize;
        WeakLayout {
            forests: lambda.floor() as usize + 1,
            rounds: log_n + 2,
            reps: REPS,
            levels: log_pairs + 2,
        }
    }

    pub fn banks(&self) -> usize {
        self.forests * (self.rounds + 1) * self.reps
    }

    pub fn cells_per_vertex(&self) -> usize {
        self.banks() * self.levels
    }

    fn bank(&self, forest: usize, round: usize, rep: usize) -> usize {
        (forest * (self.rounds + 1) + round) * self.reps + rep
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakEdgeSketch {
    n: usize,
    layout: WeakLayout,
    keys: Vec<u64>,
    /// n × cells_per_vertex, bank-major then level.
    cells: Vec<Cell>,
}

enum Sample {
    Zero,
    Found(usize),
    Failed,
}

impl WeakEdgeSketch {
    pub fn new(seed: u64, n: usize, lambda: f64) -> Self {
        let layout = WeakLayout::new(n, lambda);
        let keys = (0..layout.banks()).map(|b| keyed2(seed, 0x5131, b as u64)).collect();
        WeakEdgeSketch { n, layout, keys, cells: vec![Cell::default(); n * layout.cells_per_vertex()] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layout(&self) -> WeakLayout {
        self.layout
    }

    fn level_of(&self, bank: usize, idx: usize) -> usize {
        let h = keyed(self.keys[bank], idx as u64) | (1 << 63);
        (h.trailing_zeros() as usize).min(self.layout.levels - 1)
    }

    fn fingerprint(&self, bank: usize, idx: usize) -> u64 {
        mod_p(keyed(self.keys[bank] ^ 0xF1F1, idx as u64))
    }

    fn add_at(&mut self, vertex: usize, idx: usize, x: i64) {
        let lv = self.layout.levels;
        let base = vertex * self.layout.cells_per_vertex();
        for bank in 0..self.layout.banks() {
            let top = self.level_of(bank, idx);
            let h = self.fingerprint(bank, idx);
            let start = base + bank * lv;
            for cell in &mut self.cells[start..=start + top] {
                cell.a = cell.a.wrapping_add(x);
                cell.b = cell.b.wrapping_add((idx as i64).wrapping_mul(x));
                cell.c = add_signed(cell.c, x, h);
            }
        }
    }

    /// Adds `sign` to the multiplicity of pair (u, v), u < v.
    pub(crate) fn update(&mut self, u: usize, v: usize, sign: i64) {
        let idx = pair_index(self.n, u, v);
        self.add_at(u, idx, sign);
        self.add_at(v, idx, -sign);
    }

    pub(crate) fn merge_from(&mut self, other: &WeakEdgeSketch) {
        for (a, b) in self.cells.iter_mut().zip(&other.cells) {
            a.add(b);
        }
    }

    pub(crate) fn vertex_cells(&self, v: usize) -> &[Cell] {
        let w = self.layout.cells_per_vertex();
        &self.cells[v * w..(v + 1) * w]
    }

    pub(crate) fn vertex_cells_mut(&mut self, v: usize) -> &mut [Cell] {
        let w = self.layout.cells_per_vertex();
        &mut self.cells[v * w..(v + 1) * w]
    }

    pub(crate) fn add_vertex_cells(&mut self, v: usize, cells: &[Cell]) {
        for (a, b) in self.vertex_cells_mut(v).iter_mut().zip(cells) {
            a.add(b);
        }
    }

    pub(crate) fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub(crate) fn cells_mut(&mut self) -> &mut [Cell] {
        &mut self.cells
    }

    /// Bytes held by the sampler cells.
    pub fn space_bytes(&self) -> usize {
        self.cells.len() * 24
    }

    fn sample(&self, members: &[usize], bank: usize) -> Sample {
        let lv = self.layout.levels;
        let mut acc = vec![Cell::default(); lv];
        for &v in members {
            let start = v * self.layout.cells_per_vertex() + bank * lv;
            for (a, b) in acc.iter_mut().zip(&self.cells[start..start + lv]) {
                a.add(b);
            }
        }
        if acc[0].is_zero() {
            return Sample::Zero;
        }
        let pairs = pair_count(self.n) as i64;
        for j in (0..lv).rev() {
            let c = acc[j];
            if c.a == 0 || c.b.wrapping_rem(c.a) != 0 {
                continue;
            }
            let idx = c.b.wrapping_div(c.a);
            if !(0..pairs).contains(&idx) {
                continue;
            }
            let idx = idx as usize;
            if self.level_of(bank, idx) < j {
                continue;
            }
            if add_signed(0, c.a, self.fingerprint(bank, idx)) == c.c {
                return Sample::Found(idx);
            }
        }
        Sample::Failed
    }

    /// Spanning forest of the sketched graph from the banks of `forest`.
    fn peel_forest(&self, forest: usize) -> Result<Vec<Edge>> {
        let n = self.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let groups = |p: &mut Vec<usize>| {
            let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
            for v in 0..n {
                let r = find(p, v);
                by_root[r].push(v);
            }
            by_root.into_iter().filter(|g| !g.is_empty()).collect::<Vec<_>>()
        };
        let mut edges = Vec::new();
        let mut done = vec![false; n];
        for round in 0..self.layout.rounds {
            let mut found = Vec::new();
            for members in groups(&mut parent) {
                if done[find(&mut parent, members[0])] {
                    continue;
                }
                for rep in 0..self.layout.reps {
                    match self.sample(&members, self.layout.bank(forest, round, rep)) {
                        Sample::Zero => {
                            let r = find(&mut parent, members[0]);
                            done[r] = true;
                            break;
                        }
                        Sample::Found(idx) => {
                            found.push(pair_from_index(n, idx));
                            break;
                        }
                        Sample::Failed => {}
                    }
                }
            }
            for (u, v) in found {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru != rv {
                    parent[ru.max(rv)] = ru.min(rv);
                    let r = ru.min(rv);
                    done[r] = false;
                    edges.push((u, v));
                }
            }
        }
        let verify = self.layout.rounds;
        for members in groups(&mut parent) {
            let zero = (0..self.layout.reps)
                .any(|rep| matches!(self.sample(&members, self.layout.bank(forest, verify, rep)), Sample::Zero));
            if !zero {
                return Err(Error::SketchRecoveryFailure(format!(
                    "forest {forest} did not span its component within {} rounds",
                    self.layout.rounds
                )));
            }
        }
        edges.sort_unstable();
        Ok(edges)
    }

    /// Disjoint spanning forests F_1..F_K, each of G minus the earlier ones.
    fn peel_forests(&self) -> Result<Graph> {
        let mut work = self.clone();
        let mut union = Vec::new();
        for f in 0..self.layout.forests {
            let forest = work.peel_forest(f)?;
            for &(u, v) in &forest {
                work.update(u, v, -1);
            }
            union.extend(forest);
        }
        Graph::new(self.n, union)
    }
}

/// Result of weak-edge recovery.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakRecovery {
    /// Edges of strength ≤ λ, sorted.
    pub edges: Vec<Edge>,
    /// Number of peel-and-split passes.
    pub passes: usize,
}

/// Recovers {e : strength(e) ≤ λ} from S1.
///
/// K = ⌊λ⌋ + 1 forests certify every cut of value ≤ λ exactly, so a
/// component of the forest union whose mincut is ≤ λ exposes a cut whose
/// edges are all present. Those edges are removed from the sketch and the
/// forests re-peeled until every component has mincut > λ.
pub fn recover_weak_edges(s1: &WeakEdgeSketch, lambda: f64) -> Result<WeakRecovery> {
    if (s1.layout.forests as f64) <= lambda {
        return Err(Error::SketchMismatch(format!(
            "sketch holds {} forests, needs more than lambda = {lambda}",
            s1.layout.forests
        )));
    }
    let n = s1.n;
    let mut work = s1.clone();
    let mut weak: Vec<Edge> = Vec::new();
    let mut passes = 0;
    loop {
        passes += 1;
        if passes > n.max(1) + 1 {
            return Err(Error::SketchRecoveryFailure("weak-edge peeling did not converge".into()));
        }
        let f = work.peel_forests()?;
        let mut found = Vec::new();
        for comp in components(&f) {
            if comp.len() < 2 {
                continue;
            }
            let sub = f.induced(&comp);
            let mc = mincut(&sub)?;
            if mc.value > lambda {
                continue;
            }
            let mut inside = vec![false; comp.len()];
            for &i in &mc.side {
                inside[i] = true;
            }
            for &(a, b) in sub.edges() {
                if inside[a] != inside[b] {
                    let (u, v) = (comp[a].min(comp[b]), comp[a].max(comp[b]));
                    found.push((u, v));
                }
            }
        }
        if found.is_empty() {
            break;
        }
        for &(u, v) in &found {
            work.update(u, v, -1);
        }
        weak.extend(found);
    }
    weak.sort_unstable();
    Ok(WeakRecovery { edges: weak, passes })
}
