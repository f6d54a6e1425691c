//! Linear sketches of a simple graph.
//!
//! A [`SketchSuite`] bundles S1 (weak-edge recovery), S2 (spectral
//! sparsifier recovery) and S3 (edge count). Every component is a linear
//! function of the edge-multiplicity vector, so updates commute, cancel
//! exactly and suites built with the same parameters can be summed.

mod hash;
mod spectral_sketch;
mod weak;


pub use spectral_sketch::{recover_spectral, sampling_probabilities, SpectralSketch};
pub use weak::{recover_weak_edges, WeakEdgeSketch, WeakLayout, WeakRecovery, REPS};

use crate::error::{Error, Result};
use crate::graphcore::{check_vertex, normalize, Graph};
use crate::profile::Profile;
use weak::Cell;

const MAGIC: &[u8; 4] = b"DSPS";
const VERSION: u16 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct SketchSuite {
    seed: u64,
    n: usize,
    eps: f64,
    lambda: f64,
    s1: WeakEdgeSketch,
    s2: SpectralSketch,
    s3: i64,
}

impl SketchSuite {
    /// Suite of the empty graph with φ taken from the default profile.
    pub fn new(seed: u64, n: usize, eps: f64, lambda: f64) -> Result<Self> {
        Self::with_phi(seed, n, eps, lambda, Profile::default().phi(n, eps))
    }

    /// Suite with λ and φ taken from `profile`.
    pub fn for_profile(seed: u64, n: usize, eps: f64, profile: &Profile) -> Result<Self> {
        Self::with_phi(seed, n, eps, profile.lambda(n, eps), profile.phi(n, eps))
    }

    pub fn with_phi(seed: u64, n: usize, eps: f64, lambda: f64, phi: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::TooFewVertices { need: 1, got: 0 });
        }
        if !(eps > 0.0 && eps <= 0.5) {
            return Err(Error::InvalidParameter(format!("eps must lie in (0, 1/2], got {eps}")));
        }
        if !(lambda >= 1.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("lambda must be finite and at least 1, got {lambda}")));
        }
        if !(phi > 0.0) || !phi.is_finite() {
            return Err(Error::InvalidParameter(format!("phi must be positive, got {phi}")));
        }
        Ok(SketchSuite {
            seed,
            n,
            eps,
            lambda,
            s1: WeakEdgeSketch::new(seed, n, lambda),
            s2: SpectralSketch::new(n, phi),
            s3: 0,
        })
    }

    /// Suite of `g` built by inserting its edges in sorted order.
    pub fn of_graph(g: &Graph, seed: u64, eps: f64, profile: &Profile) -> Result<Self> {
        let mut s = Self::for_profile(seed, g.n(), eps, profile)?;
        s.insert_graph(g);
        Ok(s)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn eps(&self) -> f64 {
        self.eps
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn phi(&self) -> f64 {
        self.s2.phi()
    }
    pub fn s1(&self) -> &WeakEdgeSketch {
        &self.s1
    }
    pub fn s2(&self) -> &SpectralSketch {
        &self.s2
    }

    /// Net edge count held by S3.
    pub fn edge_count(&self) -> i64 {
        self.s3
    }

    /// Adds `sign` (±1) to the multiplicity of {u, v}.
    pub fn update(&mut self, u: usize, v: usize, sign: i64) -> Result<()> {
        check_vertex(u, self.n)?;
        check_vertex(v, self.n)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidParameter(format!("update sign must be +1 or -1, got {sign}")));
        }
        let (a, b) = normalize(u, v);
        self.s1.update(a, b, sign);
        self.s2.update(a, b, sign);
        self.s3 = self.s3.wrapping_add(sign);
        Ok(())
    }

    pub fn insert_graph(&mut self, g: &Graph) {
        for &(u, v) in g.edges() {
            self.update(u, v, 1).expect("graph edges are valid pairs");
        }
    }

    fn same_params(&self, other: &SketchSuite) -> bool {
        self.seed == other.seed
            && self.n == other.n
            && self.eps.to_bits() == other.eps.to_bits()
            && self.lambda.to_bits() == other.lambda.to_bits()
            && self.phi().to_bits() == other.phi().to_bits()
    }

    /// Adds `other` into `self`.
    pub fn merge_from(&mut self, other: &SketchSuite) -> Result<()> {
        if !self.same_params(other) {
            return Err(Error::SketchMismatch("suites differ in seed, n, eps, lambda or phi".into()));
        }
        self.s1.merge_from(&other.s1);
        self.s2.merge_from(&other.s2);
        self.s3 = self.s3.wrapping_add(other.s3);
        Ok(())
    }

    pub fn merge(&self, other: &SketchSuite) -> Result<SketchSuite> {
        let mut out = self.clone();
        out.merge_from(other)?;
        Ok(out)
    }

    /// The same parameters with all sketch content cleared.
    pub fn cleared(&self) -> SketchSuite {
        Self::with_phi(self.seed, self.n, self.eps, self.lambda, self.phi()).expect("parameters already validated")
    }

    fn write_header(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&self.seed.to_le_bytes());
        out.extend_from_slice(&(self.n as u64).to_le_bytes());
        out.extend_from_slice(&self.eps.to_le_bytes());
        out.extend_from_slice(&self.lambda.to_le_bytes());
        out.extend_from_slice(&self.phi().to_le_bytes());
    }

    /// Versioned little-endian serialization.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(64 + self.s1.space_bytes() + 8 * self.s2.counts().len());
        self.write_header(&mut out);
        let l = self.s1.layout();
        for x in [l.forests, l.rounds, l.reps, l.levels] {
            out.extend_from_slice(&(x as u32).to_le_bytes());
        }
        for c in self.s1.cells() {
            write_cell(&mut out, c);
        }
        for &x in self.s2.counts() {
            out.extend_from_slice(&x.to_le_bytes());
        }
        out.extend_from_slice(&self.s3.to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        let (seed, n, eps, lambda, phi) = read_header(&mut r)?;
        let mut suite = Self::with_phi(seed, n, eps, lambda, phi)?;
        let l = suite.s1.layout();
        for expect in [l.forests, l.rounds, l.reps, l.levels] {
            let got = r.u32()? as usize;
            if got != expect {
                return Err(Error::Decode(format!("sampler layout field {got} != {expect}")));
            }
        }
        for c in suite.s1.cells_mut() {
            *c = read_cell(&mut r)?;
        }
        for x in suite.s2.counts_mut() {
            *x = r.i64()?;
        }
        suite.s3 = r.i64()?;
        if r.pos != bytes.len() {
            return Err(Error::Decode(format!("{} trailing bytes", bytes.len() - r.pos)));
        }
        Ok(suite)
    }

    /// Per-vertex sub-sketch of `v`: its S1 sampler bank and the S2 row of
    /// pairs whose smaller endpoint is v.
    pub fn vertex_slice(&self, v: usize) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_header(&mut out);
        out.extend_from_slice(&(v as u64).to_le_bytes());
        for c in self.s1.vertex_cells(v) {
            write_cell(&mut out, c);
        }
        for &x in &self.s2.counts()[self.s2.row(v)] {
            out.extend_from_slice(&x.to_le_bytes());
        }
        out
    }

    /// Vertices whose slice is not identically zero.
    pub fn touched_vertices(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&v| {
                self.s1.vertex_cells(v).iter().any(|c| *c != Cell::default())
                    || self.s2.counts()[self.s2.row(v)].iter().any(|&x| x != 0)
            })
            .collect()
    }

    /// Adds a slice produced by [`vertex_slice`](Self::vertex_slice). S3 is
    /// kept equal to the sum of S2, which holds for any sum of slices.
    pub fn add_vertex_slice(&mut self, bytes: &[u8]) -> Result<()> {
        let mut r = Reader { bytes, pos: 0 };
        let (seed, n, eps, lambda, phi) = read_header(&mut r)?;
        let probe = SketchSuite { seed, n, eps, lambda, s1: self.s1.clone(), s2: SpectralSketch::new(0, phi), s3: 0 };
        if !self.same_params(&probe) {
            return Err(Error::SketchMismatch("slice parameters differ from suite".into()));
        }
        let v = r.u64()? as usize;
        check_vertex(v, self.n)?;
        let width = self.s1.layout().cells_per_vertex();
        let mut cells = Vec::with_capacity(width);
        for _ in 0..width {
            cells.push(read_cell(&mut r)?);
        }
        self.s1.add_vertex_cells(v, &cells);
        let row = self.s2.row(v);
        let mut delta = 0i64;
        for i in row {
            let x = r.i64()?;
            self.s2.counts_mut()[i] = self.s2.counts()[i].wrapping_add(x);
            delta = delta.wrapping_add(x);
        }
        self.s3 = self.s3.wrapping_add(delta);
        if r.pos != bytes.len() {
            return Err(Error::Decode("trailing bytes in vertex slice".into()));
        }
        Ok(())
    }

    /// Bytes of the S1 sampler banks (S2 is an exact simulation and is
    /// not counted).
    pub fn s1_space_bytes(&self) -> usize {
        self.s1.space_bytes()
    }
}

fn write_cell(out: &mut Vec<u8>, c: &Cell) {
    out.extend_from_slice(&c.a.to_le_bytes());
    out.extend_from_slice(&c.b.to_le_bytes());
    out.extend_from_slice(&c.c.to_le_bytes());
}

fn read_cell(r: &mut Reader) -> Result<Cell> {
    Ok(Cell { a: r.i64()?, b: r.i64()?, c: r.u64()? })
}

fn read_header(r: &mut Reader) -> Result<(u64, usize, f64, f64, f64)> {
    if r.take(4)? != MAGIC {
        return Err(Error::Decode("bad magic".into()));
    }
    let version = u16::from_le_bytes(r.take(2)?.try_into().expect("2 bytes"));
    if version != VERSION {
        return Err(Error::Decode(format!("unsupported version {version}")));
    }
    let seed = r.u64()?;
    let n = r.u64()? as usize;
    let eps = f64::from_bits(r.u64()?);
    let lambda = f64::from_bits(r.u64()?);
    let phi = f64::from_bits(r.u64()?);
    Ok((seed, n, eps, lambda, phi))
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, k: usize) -> Result<&'a [u8]> {
        let end = self.pos + k;
        if end > self.bytes.len() {
            return Err(Error::Decode(format!("truncated at byte {}", self.pos)));
        }
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}
