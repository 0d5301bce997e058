//! Crate-wide error type.

use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to {action} '{path}': {source}")]
    Io {
        action: &'static str,
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("csv error in '{path}': {source}")]
    Csv { path: PathBuf, source: csv::Error },

    #[error("label column '{0}' not found in header")]
    MissingLabelColumn(String),

    #[error("no feature columns besides the label column")]
    NoFeatureColumns,

    #[error("non-numeric value '{value}' at data row {row}, column '{column}'")]
    NonNumericCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("non-finite value at data row {row}, column '{column}'")]
    NonFiniteCell { row: usize, column: String },

    #[error("dataset has no samples")]
    EmptyDataset,

    #[error("class {0} has no samples")]
    EmptyClass(usize),

    #[error("zero-norm sample at column {0}")]
    ZeroNormSample(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite objective after iteration {iteration}; input is numerically degenerate")]
    NonFiniteObjective { iteration: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
