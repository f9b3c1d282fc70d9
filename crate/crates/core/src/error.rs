use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree {0} is outside [0, 1]")]
    InvalidDegree(f64),

    #[error("invalid trapezoid ({a}, {b}, {c}, {d}): expected a <= b <= c <= d and a < d")]
    InvalidTrapezoid { a: f64, b: f64, c: f64, d: f64 },

    #[error("invalid fuzzy set: {0}")]
    InvalidSet(String),

    #[error("fuzzy set has zero area, no rule fired")]
    EmptySet,

    #[error("input {value} is outside the universe [{min}, {max}]")]
    InputOutOfRange { value: f64, min: f64, max: f64 },

    #[error("unknown term `{term}` for variable `{variable}`")]
    UnknownTerm { variable: String, term: String },

    #[error("invalid rule base: {0}")]
    InvalidRuleBase(String),

    #[error("{0}")]
    Validation(ValidationErrors),

    #[error("no value bound for tree leaf `{0}`")]
    UnboundLeaf(String),

    #[error("invalid reduction tree: {0}")]
    InvalidTree(String),

    #[error("no respondents supplied")]
    NoRespondents,

    #[error("tree leaf count {0} is outside 1..=8")]
    LeafCountOutOfRange(usize),

    #[error("calibration needs at least one target")]
    NoTargets,

    #[error("invalid response matrix: {0}")]
    InvalidMatrix(String),

    #[error("total score variance is zero")]
    ZeroTotalVariance,

    #[error("item `{0}` has zero variance")]
    ZeroVarianceItem(String),

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("malformed JSON: {0}")]
    Json(String),

    #[error("malformed CSV at line {line}: {message}")]
    Csv { line: u64, message: String },
}

/// A single rejected questionnaire field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// Question id (or other field name) the violation refers to.
    pub field: String,
    pub kind: ViolationKind,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Missing,
    OutOfRange,
    NotNumeric,
    UnknownQuestion,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
#[serde(transparent)]
pub struct ValidationErrors(pub Vec<Violation>);

impl ValidationErrors {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn fields(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|v| v.field.as_str())
    }
}

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "questionnaire rejected: ")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", v.message)?;
        }
        Ok(())
    }
}

impl From<ValidationErrors> for Error {
    fn from(errors: ValidationErrors) -> Self {
        Error::Validation(errors)
    }
}
