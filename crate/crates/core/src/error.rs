use thiserror::Error;

/// Errors raised by the recovery, RIC and experiment routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix shape {rows}x{cols} is invalid: {reason}")]
    InvalidShape {
        rows: usize,
        cols: usize,
        reason: String,
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("basis is rank deficient (smallest Gram eigenvalue {lambda_min:e}, largest {lambda_max:e})")]
    RankDeficient { lambda_min: f64, lambda_max: f64 },
    #[error("symmetric eigensolver did not converge on a {dim}x{dim} matrix")]
    EigenFailure { dim: usize },
    #[error("dictionary has no columns")]
    EmptyDictionary,
    #[error("exact RIC needs {required} subsets, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("invalid counts: {0}")]
    InvalidCounts(String),
    #[error("delta {delta} is not below the threshold {threshold}")]
    ThresholdViolated { delta: f64, threshold: f64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("cannot complete a zero vector to an orthonormal basis")]
    ZeroVector,
    #[error("self-check failed: {0}")]
    SelfCheckFailed(String),
    #[error("configuration infeasible: {0}")]
    ConfigInfeasible(String),
    #[error("invalid signal: {0}")]
    InvalidSignal(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("noiseless recovery guarantee violated on a threshold-compliant trial:\n{0}")]
    TheoremViolation(String),
}

impl Error {
    /// True for failures of the numerical kernels (as opposed to malformed input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RankDeficient { .. } | Error::EigenFailure { .. } | Error::TheoremViolation(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
