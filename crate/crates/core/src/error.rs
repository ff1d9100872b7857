//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

/// Errors raised by construction, evaluation and estimation routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A vector or point had the wrong number of coordinates.
    DimensionMismatch { expected: usize, found: usize },
    /// Two objects live in different charts and were combined without
    /// an explicit conversion.
    ChartMismatch { expected: &'static str, found: &'static str },
    /// Two objects belong to different algebras.
    AlgebraMismatch,
    /// The algebra's step exceeds what the truncated group law supports.
    UnsupportedStep { step: usize, max: usize },
    /// A dilation factor was zero or negative where positivity is required.
    NonPositiveDilation,
    /// Structure constants failed a Lie algebra invariant.
    InvalidAlgebra(String),
    /// A named algebra, chart, map family or form symbol was not recognized.
    UnknownName(String),
    /// The requested operation needs exact rational evaluation but the
    /// object only supports floating point (or vice versa).
    ExactUnsupported(String),
    /// A simplex or form operation got an out-of-range degree or dimension.
    DegreeOutOfRange { degree: usize, max: usize },
    /// The Holder exponent fails the convergence precondition; the payload
    /// carries the offending exponent and the required strict lower bound.
    ExponentTooSmall { alpha: f64, required: f64 },
    /// The level budget ran out before the tail bound dropped below the
    /// requested tolerance.
    ToleranceNotReached { tail: f64, tol: f64, levels: usize },
    /// Text input (form grammar, chain records, catalog entries) failed to
    /// parse; the payload describes the first offending token.
    Parse(String),
    /// Catch-all for violated preconditions described by the message.
    Invalid(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::ChartMismatch { expected, found } => {
                write!(f, "chart mismatch: expected {expected}, found {found}")
            }
            Error::AlgebraMismatch => write!(f, "objects belong to different algebras"),
            Error::UnsupportedStep { step, max } => {
                write!(f, "step {step} algebras unsupported (group law truncated at step {max})")
            }
            Error::NonPositiveDilation => write!(f, "dilation factor must be positive"),
            Error::InvalidAlgebra(msg) => write!(f, "invalid algebra: {msg}"),
            Error::UnknownName(name) => write!(f, "unknown name: {name}"),
            Error::ExactUnsupported(msg) => write!(f, "exact evaluation unsupported: {msg}"),
            Error::DegreeOutOfRange { degree, max } => {
                write!(f, "degree {degree} out of range (max {max})")
            }
            Error::ExponentTooSmall { alpha, required } => write!(
                f,
                "Holder exponent {alpha} too small: convergence requires alpha > {required}"
            ),
            Error::ToleranceNotReached { tail, tol, levels } => write!(
                f,
                "tail bound {tail:.3e} still above tolerance {tol:.3e} after {levels} levels"
            ),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
