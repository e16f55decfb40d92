use thiserror::Error;

use crate::qcore::Dims;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m_ij - conj(m_ji)| = {residual:.3e})")]
    NonHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NonPsd { min_eigenvalue: f64 },

    #[error("trace must be 1 (got {trace})")]
    BadTrace { trace: f64 },

    #[error("state vector must have unit norm (got {norm})")]
    BadNorm { norm: f64 },

    #[error("matrix is not unitary (max |U^dag U - I| = {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("rank {rank} is not in 1..={dim}")]
    BadRank { rank: usize, dim: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("total dimension {0} exceeds the supported maximum of 64")]
    DimensionTooLarge(usize),

    #[error("invalid probability distribution: {0}")]
    BadDistribution(String),

    #[error("generator is not diagonal in the encoding basis (commutator norm {residual:.3e})")]
    GeneratorNotDiagonal { residual: f64 },

    #[error("operation unsupported for dims {0}")]
    UnsupportedDims(Dims),

    #[error("decomposition size m = {m} is below the state rank {rank}")]
    BadM { m: usize, rank: usize },

    #[error("Kraus operators are not trace preserving (max |sum K^dag K - I| = {residual:.3e})")]
    NotCptp { residual: f64 },

    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),

    #[error("invalid phase ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("prerequisite failed: {0}")]
    PrereqFailed(String),

    #[error("optimizer budget exhausted before convergence (best value {best})")]
    BudgetExhausted { best: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
