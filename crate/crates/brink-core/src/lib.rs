//! Geometry of the boundary of logistic-regression models.
//!
//! The crate answers one practical question: how close is a fitted logistic
//! regression to the boundary of its model, where the maximum likelihood
//! estimate stops existing? It provides
//!
//! - the Fisher information of an extended multinomial and its exact
//!   spectrum ([`fisher_information`], [`fisher_spectrum`]),
//! - closed-form information distances to the faces of the simplex
//!   ([`face_distance_sq`]),
//! - a logistic MLE with separation detection built in ([`fit_mle`]),
//! - the sufficient-statistic polytope of a two-column design and
//!   Mahalanobis distances to its boundary ([`suffstat_polytope_2d`],
//!   [`min_mahalanobis_to_polytope_boundary`]),
//! - upper and lower envelopes of line families ([`envelope_of_lines`]),
//! - parametric-bootstrap sampling of sufficient statistics and MLEs with a
//!   counter-based deterministic generator ([`sample_suffstats`],
//!   [`sample_mles`], [`RngStream`]),
//! - a third-order Edgeworth density for the sufficient statistic
//!   ([`edgeworth_density`]),
//! - and the boundary-proximity diagnostic tying it together
//!   ([`boundary_diagnostic`]).

// index loops mirror the matrix algebra in the numeric kernels; coefficient
// tables keep their published digit counts
#![allow(clippy::needless_range_loop, clippy::excessive_precision)]

pub mod diagnostic;
pub mod logistic;
pub mod multinomial;
pub mod numerics;
pub mod polytope;
pub mod sampling;

pub use diagnostic::{
    boundary_diagnostic, contour_points, DiagnosticError, DiagnosticReport, DiagnosticStatus,
    Evaluation, Verdict, DEFAULT_LEVEL,
};
pub use logistic::{
    center_covariates, detect_separation, fit_mle, fit_mle_opts, log_likelihood, logistic,
    model_moments, suff_stat, Cumulant3, Dataset, FitResult, InteriorFit, LogisticError,
    ModelMoments,
};
pub use multinomial::{
    face_distance_sq, fisher_information, fisher_spectrum, FaceIndexSet, FisherSpectrum,
    MultinomialError, ProbabilityVector,
};
pub use numerics::{
    chi2_cdf, chi2_quantile, cholesky, lp_feasible, sym_eigen, CholeskyFactor, Eigen,
    NumericsError, RngStream, SymmetricMatrix,
};
pub use polytope::{
    connected_vertices, envelope_of_lines, min_mahalanobis_to_polytope_boundary,
    suffstat_polytope_2d, BoundaryDistance, EnvelopeResult, EnvelopeSegment, Line, LineFamily,
    PolytopeError, SuffStatPolytope,
};
pub use sampling::{
    edgeworth_density, sample_mles, sample_suffstats, skewness, EdgeworthExpansion, MleSample,
    SamplingError, SuffStatSample,
};
