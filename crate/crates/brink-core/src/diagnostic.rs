//! The boundary-proximity diagnostic: does the chi-square-calibrated
//! Fisher-metric contour around the fitted model reach the boundary of the
//! sufficient-statistic polytope?

use thiserror::Error;

use crate::logistic::{fit_mle, model_moments, Dataset, FitResult, LogisticError};
use crate::numerics::{chi2_quantile, cholesky, NumericsError, SymmetricMatrix};
use crate::polytope::{
    min_mahalanobis_to_polytope_boundary, suffstat_polytope_2d, BoundaryDistance, PolytopeError,
};

pub const DEFAULT_LEVEL: f64 = 0.99;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagnosticError {
    #[error("polytope-based verdicts support 1 or 2 columns, got {d}")]
    Unsupported { d: usize },
    #[error(transparent)]
    Logistic(#[from] LogisticError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// dist_sq ≥ 1.5 × threshold
    Safe,
    /// threshold ≤ dist_sq < 1.5 × threshold
    Marginal,
    /// dist_sq < threshold: the confidence contour reaches the boundary
    Suspect,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Safe => "SAFE",
            Verdict::Marginal => "MARGINAL",
            Verdict::Suspect => "SUSPECT",
        }
    }
}

/// Details of an evaluated (non-separated) diagnostic.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub beta_hat: Vec<f64>,
    /// squared Mahalanobis distance from μ̂ to the polytope boundary,
    /// metric Σ̂^{-1}
    pub dist_sq: f64,
    /// chi-square quantile at `level` with D degrees of freedom
    pub threshold: f64,
    pub verdict: Verdict,
    /// closest boundary edge and point; None on the 1-column (interval) path
    pub closest_face: Option<BoundaryDistance>,
    /// true when μ̂ sits exactly on or outside the boundary
    pub boundary_contact: bool,
}

#[derive(Debug, Clone)]
pub enum DiagnosticStatus {
    /// the MLE does not exist in the interior; `recession` witnesses it
    Separated {
        recession: Vec<f64>,
    },
    Evaluated(Evaluation),
}

#[derive(Debug, Clone)]
pub struct DiagnosticReport {
    pub level: f64,
    pub status: DiagnosticStatus,
}

fn verdict_for(dist_sq: f64, threshold: f64) -> Verdict {
    if dist_sq < threshold {
        Verdict::Suspect
    } else if dist_sq < 1.5 * threshold {
        Verdict::Marginal
    } else {
        Verdict::Safe
    }
}

/// Runs the full pipeline: fit, moments at the MLE, polytope, Mahalanobis
/// distance from μ̂ = X'p̂ to the boundary, compared against the χ²_D
/// quantile at `level`.
///
/// Supports D = 2 (polytope path) and D = 1 (the polytope degenerates to an
/// interval; `closest_face` is None). Higher D is `Unsupported`. A center
/// sitting exactly on the boundary is reported as an Evaluation with
/// distance 0, verdict SUSPECT, and `boundary_contact` set.
pub fn boundary_diagnostic(d: &Dataset, level: f64) -> Result<DiagnosticReport, DiagnosticError> {
    let dim = d.d();
    if dim > 2 {
        return Err(DiagnosticError::Unsupported { d: dim });
    }
    let threshold = chi2_quantile(dim as u32, level)?;

    let fit = match fit_mle(d)? {
        FitResult::Boundary { recession } => {
            return Ok(DiagnosticReport {
                level,
                status: DiagnosticStatus::Separated { recession },
            });
        }
        FitResult::Interior(f) => f,
    };

    let moments = model_moments(d.design(), &fit.beta_hat);
    let evaluation = if dim == 1 {
        interval_distance(d, &moments.mu, &moments.sigma)?
    } else {
        planar_distance(d, &moments.mu, &moments.sigma)?
    };

    let (dist_sq, closest_face, boundary_contact) = evaluation;
    Ok(DiagnosticReport {
        level,
        status: DiagnosticStatus::Evaluated(Evaluation {
            beta_hat: fit.beta_hat,
            dist_sq,
            threshold,
            verdict: verdict_for(dist_sq, threshold),
            closest_face,
            boundary_contact,
        }),
    })
}

type DistanceParts = (f64, Option<BoundaryDistance>, bool);

/// 1-column designs: the attainable sufficient statistics form the interval
/// [Σ min(0, x_i), Σ max(0, x_i)].
fn interval_distance(
    d: &Dataset,
    mu: &[f64],
    sigma: &SymmetricMatrix,
) -> Result<DistanceParts, DiagnosticError> {
    let (mut lo, mut hi) = (0.0, 0.0);
    for i in 0..d.n() {
        let x = d.row(i)[0];
        if x < 0.0 {
            lo += x;
        } else {
            hi += x;
        }
    }
    let var = sigma.get(0, 0);
    cholesky(sigma)?;
    let m = mu[0];
    if m <= lo || m >= hi {
        return Ok((0.0, None, true));
    }
    let dist_sq = ((m - lo) * (m - lo) / var).min((hi - m) * (hi - m) / var);
    Ok((dist_sq, None, false))
}

fn planar_distance(
    d: &Dataset,
    mu: &[f64],
    sigma: &SymmetricMatrix,
) -> Result<DistanceParts, DiagnosticError> {
    let polytope = suffstat_polytope_2d(d.design())?;
    let metric = cholesky(sigma)?.inverse();
    match min_mahalanobis_to_polytope_boundary(&polytope, [mu[0], mu[1]], &metric) {
        Ok(bd) => Ok((bd.dist_sq, Some(bd), false)),
        Err(PolytopeError::CenterOutside { edge, .. }) => {
            let contact = BoundaryDistance {
                dist_sq: 0.0,
                closest: [mu[0], mu[1]],
                edge,
            };
            Ok((0.0, Some(contact), true))
        }
        Err(e) => Err(e.into()),
    }
}

/// n points equally spaced (in whitened angle) on the ellipse
/// {z : (z−μ)'M(z−μ) = radius_sq}: z(ψ) = μ + r·L^{-T}(cos ψ, sin ψ) with
/// L the Cholesky factor of M.
pub fn contour_points(
    mu: [f64; 2],
    metric: &SymmetricMatrix,
    radius_sq: f64,
    n: usize,
) -> Result<Vec<[f64; 2]>, DiagnosticError> {
    assert!(n >= 3, "an ellipse needs at least 3 points");
    assert!(radius_sq >= 0.0, "radius_sq must be nonnegative");
    if metric.dim() != 2 {
        return Err(DiagnosticError::Polytope(PolytopeError::DimensionError {
            got: metric.dim(),
        }));
    }
    let f = cholesky(metric)?;
    let r = radius_sq.sqrt();
    let mut points = Vec::with_capacity(n);
    for i in 0..n {
        let psi = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
        let u = [r * psi.cos(), r * psi.sin()];
        let w = f.solve_upper(&u);
        points.push([mu[0] + w[0], mu[1] + w[1]]);
    }
    Ok(points)
}
