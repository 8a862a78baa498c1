//! Crate-wide error type.

use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("row {row}, column \"{column}\": cannot parse {value:?} as a finite number")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row} has {got} fields, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },

    #[error("duplicate column name \"{name}\" in header")]
    DuplicateColumn { name: String },

    #[error("header column {index} is empty")]
    EmptyColumnName { index: usize },

    #[error("need at least 2 data rows, got {got}")]
    TooFewRows { got: usize },

    #[error("need at least 2 columns, got {got}")]
    TooFewColumns { got: usize },

    #[error("column \"{column}\" has {got} values, expected {expected}")]
    ColumnLengthMismatch {
        column: String,
        expected: usize,
        got: usize,
    },

    #[error("row {row}, column \"{column}\": value is not finite")]
    NonFinite { row: usize, column: String },

    #[error("vector lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least 2 samples, got {got}")]
    TooFewSamples { got: usize },

    #[error("zero-variance {which} input")]
    ZeroVarianceVector { which: &'static str },

    #[error("column \"{column}\" has zero variance over the first {rows} rows")]
    ZeroVarianceColumn { column: String, rows: usize },

    #[error("prefix length {k} out of range [{min}, {max}]")]
    PrefixOutOfRange { k: usize, min: usize, max: usize },

    #[error("min_prefix must be at least 3, got {got}")]
    MinPrefixTooSmall { got: usize },

    #[error("generator needs at least {needed} rows, got {got}")]
    GenTooFewRows { needed: usize, got: usize },

    #[error("noise amplitude must be a finite non-negative number, got {value}")]
    InvalidAmplitude { value: f64 },

    #[error("sign pattern is empty")]
    EmptySignPattern,

    #[error("sign pattern contains {value}; entries must be +1 or -1")]
    InvalidSignValue { value: i8 },

    #[error("invalid sign pattern character {ch:?}; use '+' and '-'")]
    InvalidSignChar { ch: char },

    #[error("sign pattern must start with '+' (canonical form)")]
    SignPatternLead,

    #[error("unknown column \"{name}\"")]
    UnknownColumn { name: String },

    #[error("need at least 2 predictor columns besides the target, got {available}")]
    NotEnoughPredictors { available: usize },

    #[error("subset size {k} out of range [1, {max}]")]
    SubsetSizeOutOfRange { k: usize, max: usize },

    #[error("exhaustive subset ranking is limited to {max} columns, dataset has {n}")]
    TooManyColumns { n: usize, max: usize },

    #[error("dataset has {rows} rows, shorter than min_prefix {min_prefix}")]
    DataTooShort { rows: usize, min_prefix: usize },

    #[error("every prefix is degenerate; no non-degenerate trace entries")]
    AllDegenerate,

    #[error("{method} did not converge within {limit} iterations")]
    NoConvergence { method: &'static str, limit: usize },

    #[error("correlation matrix must be square, got {rows} rows and {cols} columns")]
    NotSquare { rows: usize, cols: usize },

    #[error("correlation matrix entry ({i}, {j}) breaks the {what} invariant")]
    InvalidCorrelationEntry {
        i: usize,
        j: usize,
        what: &'static str,
    },
}
