use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("size mismatch: expected {expected} qubits, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("unsupported qubit count {0} (must be 1..=64)")]
    QubitCount(usize),

    #[error("operator is not Hermitian: {0}")]
    NotHermitian(String),

    #[error("map is not canonical: {0}")]
    NotCanonical(String),

    #[error("operators do not commute: {0}")]
    NonCommuting(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("site out of range: {0}")]
    OutOfRange(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid measurement pattern: {0}")]
    Pattern(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("eigensolver did not converge after {iterations} iterations (best residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
}
