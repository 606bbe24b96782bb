use std::fmt;

use thiserror::Error;

/// A single broken invariant found while validating a probability object.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Empty { what: &'static str },
    NonFinite { what: &'static str, row: usize, col: usize },
    Negative { what: &'static str, row: usize, col: usize, value: f64 },
    RowSum { what: &'static str, row: usize, sum: f64 },
    LabelCount { what: &'static str, expected: usize, found: usize },
    DuplicateLabel { what: &'static str, label: String },
    LabelMismatch { index: usize, expected: String, found: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty { what } => write!(f, "{what} is empty"),
            Violation::NonFinite { what, row, col } => {
                write!(f, "{what}: non-finite entry at row {row}, column {col}")
            }
            Violation::Negative { what, row, col, value } => {
                write!(f, "{what}: negative entry {value} at row {row}, column {col}")
            }
            Violation::RowSum { what, row, sum } => write!(f, "{what}: row {row} sums to {sum}"),
            Violation::LabelCount { what, expected, found } => {
                write!(f, "{what}: expected {expected} labels, found {found}")
            }
            Violation::DuplicateLabel { what, label } => {
                write!(f, "{what}: duplicate label {label:?}")
            }
            Violation::LabelMismatch { index, expected, found } => write!(
                f,
                "label mismatch at index {index}: expected {expected:?}, found {found:?}"
            ),
        }
    }
}

/// Wrapper so a list of violations can be carried by [`Error`].
#[derive(Debug, Clone, PartialEq)]
pub struct Violations(pub Vec<Violation>);

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("validation failed: {0}")]
    Invalid(Violations),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("KL divergence undefined: p({index}) > 0 where q({index}) = 0")]
    SupportViolation { index: usize },
    #[error("beta must be non-negative, got {0}")]
    NegativeBeta(f64),
    #[error("invalid solver config: {0}")]
    InvalidConfig(String),
    #[error(
        "frontier was computed on a different space (frontier {frontier}, space {space}); rebuild the frontier for this space and need"
    )]
    FingerprintMismatch { frontier: String, space: String },
    #[error("frontier has no points")]
    EmptyFrontier,
    #[error("no frontier point has {k} categories; available counts: {available:?}")]
    NoPointWithK { k: usize, available: Vec<usize> },
    #[error(
        "similarity matrix has zero standard deviation, so gamma = 1/SD is undefined; set gamma explicitly"
    )]
    UndefinedGamma,
    #[error("meaning {0:?} has zero total count")]
    ZeroCountMeaning(String),
    #[error("class {0:?} has no non-zero feature probability")]
    AllZeroClass(String),
    #[error("iterative scaling did not converge after {iterations} iterations (residual {residual:e})")]
    ScalingDiverged { iterations: usize, residual: f64 },
    #[error("{0}")]
    Format(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<Vec<Violation>> for Error {
    fn from(v: Vec<Violation>) -> Self {
        Error::Invalid(Violations(v))
    }
}
