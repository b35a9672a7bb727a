use thiserror::Error;

/// Errors produced by matrix construction, file parsing, and the
/// enumeration-backed oracles.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("entries ({i},{j}) and ({j},{i}) differ by {delta:e}, beyond the symmetry tolerance")]
    AsymmetricInput { i: usize, j: usize, delta: f64 },

    #[error("duplicate sparse entry ({i},{j})")]
    DuplicateEntry { i: usize, j: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("enumeration size {needed} exceeds cap {cap}")]
    CapExceeded { needed: u128, cap: u128 },

    #[error("coupling matrix has nonzero diagonal entry at index {index}")]
    NonzeroDiagonal { index: usize },

    #[error("eigensolver did not converge within {sweeps} sweeps")]
    EigenNoConvergence { sweeps: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
