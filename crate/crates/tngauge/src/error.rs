use thiserror::Error;

/// Errors shared by every layer of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Two tensors disagree on the dimension of a shared index, or an
    /// operation was handed indices that do not belong to its tensor.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A dense decomposition received non-finite data or failed to converge.
    #[error("numerical error: {0}")]
    NumericalError(String),

    /// A matrix that must be Hermitian is not, beyond tolerance.
    #[error("matrix is not hermitian (relative deviation {0:.3e})")]
    NotHermitian(f64),

    /// A matrix that must be positive semidefinite has a significantly
    /// negative eigenvalue.
    #[error("matrix is not positive semidefinite (relative eigenvalue {0:.3e})")]
    NotPositive(f64),

    /// An input is degenerate for the requested operation (e.g. zero trace).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A message update produced a zero (traceless) message, which signals a
    /// null slice of the state.
    #[error("degenerate message: {0}")]
    DegenerateMessage(String),

    /// A state-level quantity (norm, local denominator) vanished.
    #[error("degenerate state: {0}")]
    DegenerateState(String),

    /// An exact contraction would exceed the configured size limit.
    #[error("contraction too large: {0}")]
    TooLarge(String),

    /// A model or graph specification is infeasible.
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    /// Bad run configuration (unknown key, unparsable value, missing file).
    #[error("config error: {0}")]
    Config(String),

    /// Malformed serialized network data.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
