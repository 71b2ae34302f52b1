use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// The input violates a documented precondition (shape, range, labels, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An iterative numerical routine failed to converge.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// A matrix expected to have full column rank does not.
    #[error("rank-deficient matrix: {0}")]
    RankDeficient(String),

    /// A reweighting denominator vanished with zero smoothing.
    #[error("degenerate weight: {0}")]
    DegenerateWeight(String),

    /// The ratio denominator g(v) was not strictly positive at an iterate.
    #[error("non-positive denominator: {0}")]
    DenominatorNonPositive(String),

    /// A solver trace is too short for the requested diagnostic.
    #[error("insufficient trace: {0}")]
    InsufficientTrace(String),

    /// The projection captures essentially no data energy.
    #[error("degenerate projection: {0}")]
    DegenerateProjection(String),

    /// Malformed input file.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
