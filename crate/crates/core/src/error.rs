use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("edge weight must be positive and finite, got {0}")]
    InvalidWeight(f64),

    #[error("edge ({0}, {1}) not in graph")]
    EdgeNotFound(usize, usize),

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("graph needs at least {need} vertices, has {got}")]
    TooFewVertices { need: usize, got: usize },

    #[error("instance too large for exhaustive enumeration: n = {n}, limit = {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sketch parameter mismatch: {0}")]
    SketchMismatch(String),

    #[error("sketch recovery failed: {0}; retry with a fresh seed")]
    SketchRecoveryFailure(String),

    #[error("sketched residual vector is not 0/1 at pair ({0}, {1}): multiplicity {2}")]
    NonSimpleResidual(usize, usize, i64),

    #[error("sketch decoding failed: {0}")]
    Decode(String),

    #[error("convex program infeasible: {0}")]
    Infeasible(String),

    #[error("rounding failed to hit {target} edges in {attempts} attempts")]
    RoundingExhausted { target: usize, attempts: u64 },

    #[error("invalid stream event at position {position}: {reason}")]
    InvalidStream { position: usize, reason: String },

    #[error("edge sets overlap at ({0}, {1})")]
    OverlappingPartitions(usize, usize),

    #[error("machine {machine} exceeded the message cap: {bytes} > {cap} bytes")]
    MessageCapExceeded { machine: usize, bytes: usize, cap: usize },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Failures that a rerun with a fresh seed may avoid.
    pub fn is_retryable(&self) -> bool {
        matches!(self, Error::SketchRecoveryFailure(_) | Error::RoundingExhausted { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
