use thiserror::Error;

/// Errors produced by contract violations anywhere in the toolkit.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |m - m†| = {deviation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("eigensolver failed to converge after {sweeps} sweeps (off-diagonal norm {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("state is not normalized: |norm² - 1| = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("matrix is not a density matrix: {reason}")]
    NotDensityMatrix { reason: String },

    #[error("star graph needs at least 2 leaves, got {0}")]
    TooFewLeaves(usize),

    #[error("vertex barbell needs cliques of size at least 2, got {0}")]
    BarbellTooSmall(usize),

    #[error("tripartition violates the no-L-R-edge constraint: edge ({0}, {1})")]
    ForbiddenEdge(usize, usize),

    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("pairing reuses site {0}")]
    DuplicatePairedSite(usize),

    #[error("pairing must join an L site to an R site, got ({0}, {1})")]
    PairingNotLtoR(usize, usize),

    #[error("schedule segment {index} has negative duration {duration}")]
    NegativeDuration { index: usize, duration: f64 },

    #[error("circuit violates the architecture: {0}")]
    ArchitectureViolation(String),

    #[error("{context}: {qubits} qubits exceeds the dense-simulation cap of {max}")]
    TooManyQubits {
        context: &'static str,
        qubits: usize,
        max: usize,
    },

    #[error("nested commutator needs a sequence of length >= 2, got {0}")]
    SequenceTooShort(usize),

    #[error("bottleneck size N_C must be at least 1")]
    EmptyBottleneck,

    #[error("delta must lie in (0, 1/3], got {0}")]
    DeltaOutOfRange(f64),

    #[error("Trotter half-order k must be at least 1, got {0}")]
    BadTrotterOrder(usize),

    #[error("Dicke occupancy oracle needs even n with 2 <= n <= 16, got {0}")]
    BadDickeSize(usize),

    #[error("{context}: expected {expected}")]
    InvalidArgument {
        context: &'static str,
        expected: String,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
