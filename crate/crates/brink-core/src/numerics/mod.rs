//! Small dense numerical kernels: symmetric eigendecomposition, Cholesky,
//! chi-square quantiles, cone feasibility LPs, and a reproducible counter
//! RNG. Everything here targets the tiny dimensions (D ≤ 10) the rest of the
//! crate works in.

mod chi2;
mod cholesky;
mod eigen;
mod lp;
mod matrix;
mod rng;

pub use chi2::{chi2_cdf, chi2_quantile, ln_gamma, reg_lower_gamma};
pub use cholesky::{cholesky, CholeskyFactor};
pub use eigen::{sym_eigen, Eigen};
pub use lp::lp_feasible;
pub use matrix::SymmetricMatrix;
pub use rng::RngStream;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("probability must lie strictly inside (0, 1), got {0}")]
    ProbabilityOutOfRange(f64),
    #[error("matrix is not positive definite: pivot {pivot:e} at index {index}")]
    NotPositiveDefinite { index: usize, pivot: f64 },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix must have at least one row")]
    EmptyMatrix,
}
