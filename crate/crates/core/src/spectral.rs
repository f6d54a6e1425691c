//! Pseudo-inverses, effective resistance and sparsifier verification.
//!
//! Everything here is dense: symmetric eigendecompositions of n×n Laplacians.
//! Eigenvalues below `NULL_THRESHOLD · λ_max` are treated as kernel, and
//! verdicts allow a multiplicative `VERDICT_SLACK` beyond the (1 ± ε) band.

use crate::error::{Error, Result};
use crate::graphcore::{component_labels, laplacian, Weighted};
use crate::parallel::{self, Exec};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

pub const NULL_THRESHOLD: f64 = 1e-8;
pub const VERDICT_SLACK: f64 = 1e-6;
/// Largest n accepted by the exhaustive cut check.
pub const MAX_BRUTEFORCE_N: usize = 24;

fn check_symmetric(l: &DMatrix<f64>) -> Result<()> {
    if !l.is_square() {
        return Err(Error::SizeMismatch { expected: l.nrows(), got: l.ncols() });
    }
    let scale = l.amax().max(1.0);
    let asym = (l - l.transpose()).amax();
    if asym > 1e-9 * scale {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(())
}

/// Orthonormal eigenbasis of the image of a PSD matrix together with the
/// matching eigenvalues.
#[derive(Debug, Clone)]
pub struct ImageFactor {
    n: usize,
    /// n × r, orthonormal columns spanning Im(L).
    basis: DMatrix<f64>,
    eigenvalues: Vec<f64>,
    /// r × n, rows Λ^{-1/2} Uᵀ, so `pinv_sqrt = basis · whiten`.
    whiten: DMatrix<f64>,
}

impl ImageFactor {
    pub fn new(l: &DMatrix<f64>) -> Result<Self> {
        check_symmetric(l)?;
        let n = l.nrows();
        let eig = SymmetricEigen::new(l.clone());
        let lmax = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b));
        let lmin = eig.eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        if n > 0 && lmin < -NULL_THRESHOLD * lmax.max(1.0) {
            return Err(Error::NotPsd(lmin));
        }
        let cutoff = NULL_THRESHOLD * lmax;
        let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > cutoff && lmax > 0.0).collect();
        let r = keep.len();
        let mut basis = DMatrix::zeros(n, r);
        let mut whiten = DMatrix::zeros(r, n);
        let mut eigenvalues = Vec::with_capacity(r);
        for (j, &i) in keep.iter().enumerate() {
            let lam = eig.eigenvalues[i];
            eigenvalues.push(lam);
            let col = eig.eigenvectors.column(i);
            basis.set_column(j, &col);
            let s = 1.0 / lam.sqrt();
            for k in 0..n {
                whiten[(j, k)] = col[k] * s;
            }
        }
        Ok(ImageFactor { n, basis, eigenvalues, whiten })
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// W = Λ^{-1/2}Uᵀ (r × n).
    pub fn whiten(&self) -> &DMatrix<f64> {
        &self.whiten
    }

    /// L^{†/2}.
    pub fn pinv_sqrt(&self) -> DMatrix<f64> {
        &self.basis * &self.whiten
    }

    /// L^†.
    pub fn pinv(&self) -> DMatrix<f64> {
        let mut scaled = self.basis.clone();
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            scaled.column_mut(j).scale_mut(1.0 / lam);
        }
        &scaled * self.basis.transpose()
    }

    /// The r × r matrix `W M Wᵀ` whose eigenvalues are the nontrivial
    /// eigenvalues of `L^{†/2} M L^{†/2}` restricted to Im(L).
    pub fn sandwich(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        let wm = &self.whiten * m;
        let mut s = wm * self.whiten.transpose();
        // symmetrise against round-off
        let r = s.nrows();
        for i in 0..r {
            for j in i + 1..r {
                let a = 0.5 * (s[(i, j)] + s[(j, i)]);
                s[(i, j)] = a;
                s[(j, i)] = a;
            }
        }
        s
    }

    /// Maps an image-coordinate vector v to z = L^{†/2} (U v).
    pub fn lift(&self, v: &DVector<f64>) -> DVector<f64> {
        self.whiten.transpose() * v
    }
}

/// L^{†/2} of a symmetric PSD matrix.
pub fn pinv_sqrt(l: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    Ok(ImageFactor::new(l)?.pinv_sqrt())
}

/// Moore–Penrose pseudo-inverse of a symmetric PSD matrix.
pub fn pinv(l: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    Ok(ImageFactor::new(l)?.pinv())
}

/// All-pairs effective resistances; `+∞` between different components.
pub fn resistance_matrix<G: Weighted>(g: &G) -> Result<DMatrix<f64>> {
    let n = g.n();
    let p = pinv(&laplacian(g))?;
    let labels = component_labels(g);
    let mut r = DMatrix::zeros(n, n);
    for u in 0..n {
        for v in u + 1..n {
            let val = if labels[u] == labels[v] {
                (p[(u, u)] + p[(v, v)] - 2.0 * p[(u, v)]).max(0.0)
            } else {
                f64::INFINITY
            };
            r[(u, v)] = val;
            r[(v, u)] = val;
        }
    }
    Ok(r)
}

/// `(e_u − e_v)ᵀ L^† (e_u − e_v)`; `+∞` when u and v are disconnected.
pub fn effective_resistance<G: Weighted>(g: &G, u: usize, v: usize) -> Result<f64> {
    crate::graphcore::check_vertex(u, g.n())?;
    crate::graphcore::check_vertex(v, g.n())?;
    if u == v {
        return Ok(0.0);
    }
    let labels = component_labels(g);
    if labels[u] != labels[v] {
        return Ok(f64::INFINITY);
    }
    let p = pinv(&laplacian(g))?;
    Ok((p[(u, u)] + p[(v, v)] - 2.0 * p[(u, v)]).max(0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralVerdict {
    pub ok: bool,
    /// Unit-norm z with zᵀL_h z outside (1 ± ε)·zᵀL_g z; present iff `!ok`.
    pub witness: Option<Vec<f64>>,
    /// Nontrivial eigenvalue of L_g^{†/2} L_h L_g^{†/2} farthest from 1
    /// (0 or +∞ for component mismatches).
    pub extreme_eigenvalue: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

fn unit_indicator(n: usize, labels: &[usize], comp: usize) -> Vec<f64> {
    let size = labels.iter().filter(|&&l| l == comp).count() as f64;
    labels.iter().map(|&l| if l == comp { 1.0 / size.sqrt() } else { 0.0 }).take(n).collect()
}

/// Whether `band_lo ≤ λ ≤ band_hi` for eigenvalue λ with slack.
pub(crate) fn in_band(lam: f64, eps: f64) -> bool {
    lam >= (1.0 - eps) * (1.0 - VERDICT_SLACK) && lam <= (1.0 + eps) * (1.0 + VERDICT_SLACK)
}

/// Checks `(1−ε) L_g ⪯ L_h ⪯ (1+ε) L_g`.
pub fn is_spectral_sparsifier<H: Weighted, G: Weighted>(h: &H, g: &G, eps: f64) -> Result<SpectralVerdict> {
    let n = g.n();
    if h.n() != n {
        return Err(Error::SizeMismatch { expected: n, got: h.n() });
    }
    let lg = component_labels(g);
    let lh = component_labels(h);
    if let Some((u, _, _)) = h.weighted_edges().find(|&(u, v, _)| lg[u] != lg[v]) {
        return Ok(SpectralVerdict {
            ok: false,
            witness: Some(unit_indicator(n, &lg, lg[u])),
            extreme_eigenvalue: f64::INFINITY,
            min_eigenvalue: f64::NAN,
            max_eigenvalue: f64::INFINITY,
        });
    }
    if let Some((u, _, _)) = g.weighted_edges().find(|&(u, v, _)| lh[u] != lh[v]) {
        return Ok(SpectralVerdict {
            ok: false,
            witness: Some(unit_indicator(n, &lh, lh[u])),
            extreme_eigenvalue: 0.0,
            min_eigenvalue: 0.0,
            max_eigenvalue: f64::NAN,
        });
    }
    let factor = ImageFactor::new(&laplacian(g))?;
    if factor.rank() == 0 {
        return Ok(SpectralVerdict { ok: true, witness: None, extreme_eigenvalue: 1.0, min_eigenvalue: 1.0, max_eigenvalue: 1.0 });
    }
    let eig = SymmetricEigen::new(factor.sandwich(&laplacian(h)));
    let (mut imin, mut imax) = (0, 0);
    for i in 0..eig.eigenvalues.len() {
        if eig.eigenvalues[i] < eig.eigenvalues[imin] {
            imin = i;
        }
        if eig.eigenvalues[i] > eig.eigenvalues[imax] {
            imax = i;
        }
    }
    let (lo, hi) = (eig.eigenvalues[imin], eig.eigenvalues[imax]);
    let pick = if (1.0 - lo) >= (hi - 1.0) { imin } else { imax };
    let extreme = eig.eigenvalues[pick];
    let ok = in_band(lo, eps) && in_band(hi, eps);
    let witness = (!ok).then(|| {
        let v = eig.eigenvectors.column(pick).into_owned();
        let z = factor.lift(&v);
        let norm = z.norm();
        z.iter().map(|x| x / norm).collect()
    });
    Ok(SpectralVerdict { ok, witness, extreme_eigenvalue: extreme, min_eigenvalue: lo, max_eigenvalue: hi })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutVerdict {
    pub ok: bool,
    /// One side of the worst violating cut (sorted); present iff `!ok`.
    pub witness: Option<Vec<usize>>,
    /// Largest |cut_h/cut_g − 1| over nontrivial cuts (+∞ when cut_g = 0 < cut_h).
    pub worst_deviation: f64,
    pub cuts_checked: u64,
}

struct CutScan {
    worst: f64,
    worst_mask: u64,
    violated: bool,
}

fn adjacency_weights<G: Weighted>(g: &G) -> Vec<Vec<(usize, f64)>> {
    let mut adj = vec![Vec::new(); g.n()];
    for (u, v, w) in g.weighted_edges() {
        adj[u].push((v, w));
        adj[v].push((u, w));
    }
    adj
}

fn scan_range(
    adj_h: &[Vec<(usize, f64)>],
    adj_g: &[Vec<(usize, f64)>],
    eps: f64,
    range: std::ops::Range<u64>,
) -> CutScan {
    let n = adj_g.len();
    let gray = |i: u64| i ^ (i >> 1);
    let in_set = |mask: u64, v: usize| v < 64 && (mask >> v) & 1 == 1;
    let full_cut = |adj: &[Vec<(usize, f64)>], mask: u64| -> f64 {
        let mut c = 0.0;
        for u in 0..n {
            if in_set(mask, u) {
                for &(v, w) in &adj[u] {
                    if !in_set(mask, v) {
                        c += w;
                    }
                }
            }
        }
        c
    };
    let mut mask = gray(range.start);
    let mut ch = full_cut(adj_h, mask);
    let mut cg = full_cut(adj_g, mask);
    let mut scan = CutScan { worst: 0.0, worst_mask: 0, violated: false };
    let lo = (1.0 - eps) * (1.0 - VERDICT_SLACK);
    let hi = (1.0 + eps) * (1.0 + VERDICT_SLACK);
    for i in range.clone() {
        if i > range.start {
            let v = (i.trailing_zeros()) as usize;
            // toggling v: edges to same-side neighbours start crossing
            let toggle = |adj: &[Vec<(usize, f64)>], cut: &mut f64| {
                let was = in_set(mask, v);
                for &(w, wt) in &adj[v] {
                    if in_set(mask, w) == was {
                        *cut += wt;
                    } else {
                        *cut -= wt;
                    }
                }
            };
            toggle(adj_h, &mut ch);
            toggle(adj_g, &mut cg);
            mask ^= 1 << v;
        }
        if mask == 0 {
            continue;
        }
        let abs_tol = 1e-9 * (1.0 + cg.abs());
        let (dev, bad) = if cg.abs() <= 1e-12 {
            if ch.abs() <= abs_tol {
                (0.0, false)
            } else {
                (f64::INFINITY, true)
            }
        } else {
            let ratio = ch / cg;
            ((ratio - 1.0).abs(), (ch < lo * cg - abs_tol) || (ch > hi * cg + abs_tol))
        };
        if bad && (!scan.violated || dev > scan.worst) {
            scan.violated = true;
            scan.worst = dev;
            scan.worst_mask = mask;
        } else if !scan.violated && dev > scan.worst {
            scan.worst = dev;
            scan.worst_mask = mask;
        }
    }
    scan
}

/// Exhaustive check of `(1−ε) cut_g(S) ≤ cut_h(S) ≤ (1+ε) cut_g(S)` over all
/// 2^(n−1) − 1 nontrivial cuts (vertex n−1 is fixed outside S).
pub fn is_cut_sparsifier_bruteforce<H: Weighted + Sync, G: Weighted + Sync>(h: &H, g: &G, eps: f64) -> Result<CutVerdict> {
    is_cut_sparsifier_bruteforce_with(h, g, eps, Exec::default())
}

pub fn is_cut_sparsifier_bruteforce_with<H: Weighted + Sync, G: Weighted + Sync>(
    h: &H,
    g: &G,
    eps: f64,
    exec: Exec,
) -> Result<CutVerdict> {
    let n = g.n();
    if h.n() != n {
        return Err(Error::SizeMismatch { expected: n, got: h.n() });
    }
    if n > MAX_BRUTEFORCE_N {
        return Err(Error::TooLarge { n, limit: MAX_BRUTEFORCE_N });
    }
    if n < 2 {
        return Ok(CutVerdict { ok: true, witness: None, worst_deviation: 0.0, cuts_checked: 0 });
    }
    let adj_h = adjacency_weights(h);
    let adj_g = adjacency_weights(g);
    let total: u64 = 1 << (n - 1);
    let ranges = parallel::chunks(total, 1 << 16);
    let scans = parallel::map(exec, 0..ranges.len(), |i| scan_range(&adj_h, &adj_g, eps, ranges[i].clone()));
    // merge in index order; strict comparisons keep the earliest worst cut
    let mut best = CutScan { worst: 0.0, worst_mask: 0, violated: false };
    for s in scans {
        let better = match (s.violated, best.violated) {
            (true, false) => true,
            (false, true) => false,
            _ => s.worst > best.worst,
        };
        if better {
            best = s;
        }
    }
    let witness = best.violated.then(|| (0..n).filter(|&v| (best.worst_mask >> v) & 1 == 1).collect());
    Ok(CutVerdict { ok: !best.violated, witness, worst_deviation: best.worst, cuts_checked: total - 1 })
}
