use thiserror::Error;

/// Errors produced by constructors and checks in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op} needs a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("dimension {dim} exceeds the limit {limit}")]
    SizeLimit { dim: usize, limit: usize },

    #[error("not a permutation of 0..{len}: {perm:?}")]
    InvalidPermutation { perm: Vec<usize>, len: usize },

    #[error("local dimension must be at least 2, got {0}")]
    Dimension(usize),

    #[error("label out of range: {0}")]
    LabelRange(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("linear system is singular: rank {rank} < {size}")]
    Singular { rank: usize, size: usize },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("qasm line {line}: {msg}")]
    Qasm { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
