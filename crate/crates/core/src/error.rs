//! Crate-wide error type.

use thiserror::Error;

use crate::fan::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The zero vector has no primitive generator.
    #[error("zero vector has no primitive generator")]
    ZeroVector,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix must be nonempty")]
    EmptyMatrix,

    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquareMatrix { rows: usize, cols: usize },

    /// The fan failed structural validation; the report lists every
    /// violation found.
    #[error("fan failed validation:\n{0}")]
    InvalidFan(ValidationReport),

    #[error("fan is not smooth")]
    NotSmooth,

    #[error("fan is not complete")]
    NotComplete,

    #[error("fan is not projective")]
    NotProjective,

    #[error("cone is not a cone of the fan")]
    ConeNotInFan,

    #[error("wall does not belong to this fan")]
    ForeignWall,

    #[error("divisor does not match the fan's ray set")]
    ForeignDivisor,

    #[error("curve class does not match the fan's ray set")]
    ForeignCurveClass,

    #[error("class division requires k >= 1")]
    ZeroDivisionIndex,

    #[error("curve class does not lie on an extremal ray")]
    NotExtremal,

    /// A builder received an argument outside its documented range.
    #[error("{0}")]
    BadArgument(String),

    #[error(
        "degree list must start with the zero divisor \
         (subtract the first divisor from every entry)"
    )]
    DegreesNotNormalized,

    /// Violation of an internal invariant. Seeing this error signals a bug
    /// in this crate, never a problem with the input.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
