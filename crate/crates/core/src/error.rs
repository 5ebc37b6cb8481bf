use thiserror::Error;

/// Errors produced by channel construction, state manipulation, and the
/// verification harness.
#[derive(Debug, Error)]
pub enum Error {
    /// Channel parameters violate the physicality region for their family.
    #[error("non-physical channel parameters: {0}")]
    NonPhysical(String),

    /// A parameter is outside its admissible domain (NaN, wrong sign, wrong range).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Mode count of a state does not match what the operation supports.
    #[error("mode mismatch: expected {expected} mode(s), got {got}")]
    ModeMismatch { expected: usize, got: usize },

    /// Fock-space dimensions of two objects are incompatible.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Covariance matrix fails symmetry or the uncertainty bound.
    #[error("invalid covariance matrix: {0}")]
    InvalidCovariance(String),

    /// A matrix expected to be Hermitian deviates by more than the tolerance.
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NonHermitian(f64),

    /// Population lost to truncation exceeds the configured budget.
    #[error("truncation budget exceeded: tail population {tail:.3e} > budget {budget:.3e}")]
    TruncationBudgetExceeded { tail: f64, budget: f64 },

    /// A reference state in a relative-entropy computation is numerically
    /// singular on the support that matters.
    #[error("reference state is singular on the required support (min eigenvalue {0:.3e})")]
    SingularReference(f64),

    /// Eigendecomposition did not converge.
    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    /// Malformed grid or output specification for plot data.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
