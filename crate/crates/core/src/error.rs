//! Error type shared by every module of the engine.

use thiserror::Error;

/// Failures raised by construction or checking routines.
///
/// Relation failures are not errors: they are reported through
/// [`crate::report::CheckReport`]. Errors signal that a check could not
/// be carried out at all.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("invalid dimensions: {0}")]
    InvalidDims(String),
    #[error("dimension mismatch: {0}")]
    DimsMismatch(String),
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("pole: denominator factor {factor} vanishes")]
    Pole { factor: String },
    #[error("unassigned variable {0}")]
    UnassignedVariable(String),
    #[error("pole at zero: expansion at 0 is undefined, move the evaluation point")]
    PoleAtZero,
    #[error("truncation exhausted in variable {var}")]
    TruncationExhausted { var: String },
    #[error("product is not a well-defined formal series in variable {var}")]
    IllDefinedProduct { var: String },
    #[error("exponent {exps:?} lies outside the validity window")]
    OutsideWindow { exps: Vec<i32> },
    #[error("Gauss pivot singular at index {index}")]
    PivotSingular { index: usize },
    #[error("denominator does not split into rational linear factors: {0}")]
    NonSplitDenominator(String),
    #[error("inadmissible evaluation point {point}: {reason}")]
    InadmissiblePoint { point: String, reason: String },
    #[error("degenerate deformation parameter: hbar must be nonzero")]
    ZeroHbar,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
