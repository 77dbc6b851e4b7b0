//! Command-line front end for the boundary diagnostic: CSV ingestion,
//! configuration, orchestration of fit, diagnostic, and sampling study,
//! and emission of a JSON report plus plot-data CSV files.

use std::path::PathBuf;

use thiserror::Error;

use brink_core::{DiagnosticError, LogisticError, NumericsError, PolytopeError, SamplingError};

pub mod config;
pub mod input;
pub mod report;

pub use config::{Cli, RunConfig};
pub use input::parse_csv;
pub use report::{run, Report};

/// Everything that can stop a run. `exit_code` separates bad input (2)
/// from numerical failure inside the pipeline (3).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    ReadInput {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    WriteOutput {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse config {path}: {message}")]
    ConfigSyntax { path: PathBuf, message: String },
    #[error("missing required option --{name}")]
    MissingOption { name: &'static str },
    #[error("level must lie strictly between 0 and 1, got {got}")]
    LevelOutOfRange { got: f64 },
    #[error("exactly one covariate column is supported, got {got}")]
    CovariateCount { got: usize },
    #[error("grid resolution must be at least 2, got {got}")]
    GridResolution { got: usize },
    #[error("grid half-width must be positive and finite, got {got}")]
    GridHalfWidth { got: f64 },
    #[error("cannot parse {path}: {message}")]
    CsvSyntax { path: PathBuf, message: String },
    #[error("{path} has no data rows")]
    EmptyFile { path: PathBuf },
    #[error("column {column:?} not found in {path}")]
    MissingColumn { column: String, path: PathBuf },
    #[error("row {row}: response {value:?} is not 0 or 1")]
    NonBinaryResponse { row: usize, value: String },
    #[error("row {row}, column {column:?}: {value:?} is not a finite number")]
    BadNumber {
        row: usize,
        column: String,
        value: String,
    },
    #[error("invalid dataset: {0}")]
    Dataset(#[from] LogisticError),
    #[error("diagnostic failed: {0}")]
    Diagnostic(#[from] DiagnosticError),
    #[error("polytope construction failed: {0}")]
    Polytope(#[from] PolytopeError),
    #[error("numerical failure: {0}")]
    Numerics(#[from] NumericsError),
    #[error("sampling failed: {0}")]
    Sampling(#[from] SamplingError),
}

impl CliError {
    /// Stable machine-parsable identifier, printed as `error[{code}]: ...`.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::ReadInput { .. } => "read-input",
            CliError::WriteOutput { .. } => "write-output",
            CliError::ConfigSyntax { .. } => "config-syntax",
            CliError::MissingOption { .. } => "missing-option",
            CliError::LevelOutOfRange { .. } => "level-range",
            CliError::CovariateCount { .. } => "covariate-count",
            CliError::GridResolution { .. } => "grid-resolution",
            CliError::GridHalfWidth { .. } => "grid-half-width",
            CliError::CsvSyntax { .. } => "csv-syntax",
            CliError::EmptyFile { .. } => "empty-file",
            CliError::MissingColumn { .. } => "missing-column",
            CliError::NonBinaryResponse { .. } => "non-binary-response",
            CliError::BadNumber { .. } => "bad-number",
            CliError::Dataset(_) => "bad-dataset",
            CliError::Diagnostic(_) => "diagnostic",
            CliError::Polytope(_) => "polytope",
            CliError::Numerics(_) => "numerics",
            CliError::Sampling(_) => "sampling",
        }
    }

    /// 2 for input and validation problems, 3 for numerical failures
    /// inside the pipeline.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Diagnostic(_)
            | CliError::Polytope(_)
            | CliError::Numerics(_)
            | CliError::Sampling(_) => 3,
            _ => 2,
        }
    }
}
