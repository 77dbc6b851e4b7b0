//! Monte-Carlo experiments under a fitted model: sufficient-statistic and
//! MLE sampling distributions, boundary-hit accounting, skewness, and the
//! bivariate Edgeworth density with the third-cumulant correction.

use thiserror::Error;

use crate::logistic::{
    fit_mle, logistic, Cumulant3, Dataset, FitResult, LogisticError, ModelMoments,
};
use crate::numerics::{cholesky, CholeskyFactor, NumericsError, RngStream};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SamplingError {
    #[error("skewness needs at least 3 values and nonzero variance")]
    DegenerateSample,
    #[error("point has dimension {got}, moments have dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Sufficient statistics X't drawn under the model at a fixed β, with a
/// per-draw flag marking replicates whose own MLE would sit on the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct SuffStatSample {
    pub draws: Vec<Vec<f64>>,
    pub on_boundary: Vec<bool>,
    /// provenance of the generator the sample came from
    pub seed: u64,
    pub stream_id: u64,
}

/// MLE replicates: interior estimates plus boundary accounting.
/// `interior_estimates.len() + boundary_count == total`; `nonconvergent`
/// counts the boundary replicates that came from a failed Newton iteration
/// rather than a detected recession direction.
#[derive(Debug, Clone, PartialEq)]
pub struct MleSample {
    pub interior_estimates: Vec<Vec<f64>>,
    pub boundary_count: usize,
    pub nonconvergent: usize,
    pub total: usize,
}

fn replicate_responses(probs: &[f64], rng: &RngStream, rep: u64) -> Vec<bool> {
    let mut sub = rng.substream(rep);
    probs.iter().map(|&p| sub.bernoulli(p)).collect()
}

fn base_dataset(design: &[Vec<f64>], context: &str) -> Dataset {
    Dataset::new(design.to_vec(), vec![false; design.len()])
        .unwrap_or_else(|e| panic!("{context}: design must satisfy dataset invariants: {e}"))
}

/// Draws `reps` replicates of t_i ~ Bernoulli(logistic(x_i'beta)) and
/// records X't per replicate. Replicate r consumes `rng.substream(r)`, so
/// the sample is bit-reproducible however the work is partitioned.
pub fn sample_suffstats(
    design: &[Vec<f64>],
    beta: &[f64],
    reps: usize,
    rng: RngStream,
) -> SuffStatSample {
    let base = base_dataset(design, "sample_suffstats");
    let probs: Vec<f64> = design
        .iter()
        .map(|row| logistic(row.iter().zip(beta).map(|(x, b)| x * b).sum()))
        .collect();

    let mut draws = Vec::with_capacity(reps);
    let mut on_boundary = Vec::with_capacity(reps);
    for r in 0..reps {
        let t = replicate_responses(&probs, &rng, r as u64);
        let replicate = base.with_responses(t).expect("length preserved");
        draws.push(crate::logistic::suff_stat(&replicate));
        on_boundary.push(crate::logistic::detect_separation(&replicate).is_some());
    }
    SuffStatSample {
        draws,
        on_boundary,
        seed: rng.seed(),
        stream_id: rng.stream_id(),
    }
}

/// Fits every replicate drawn as in `sample_suffstats` (same substream per
/// replicate index, so paired calls see identical data). Boundary fits
/// increment `boundary_count`; Newton failures count as boundary and are
/// tallied separately in `nonconvergent`.
pub fn sample_mles(design: &[Vec<f64>], beta: &[f64], reps: usize, rng: RngStream) -> MleSample {
    let base = base_dataset(design, "sample_mles");
    let probs: Vec<f64> = design
        .iter()
        .map(|row| logistic(row.iter().zip(beta).map(|(x, b)| x * b).sum()))
        .collect();

    let mut interior = Vec::new();
    let mut boundary = 0usize;
    let mut nonconvergent = 0usize;
    for r in 0..reps {
        let t = replicate_responses(&probs, &rng, r as u64);
        let replicate = base.with_responses(t).expect("length preserved");
        match fit_mle(&replicate) {
            Ok(FitResult::Interior(f)) => interior.push(f.beta_hat),
            Ok(FitResult::Boundary { .. }) => boundary += 1,
            Err(LogisticError::NoConvergence { .. }) => {
                boundary += 1;
                nonconvergent += 1;
            }
            Err(e) => panic!("replicate fit failed structurally: {e}"),
        }
    }
    MleSample {
        interior_estimates: interior,
        boundary_count: boundary,
        nonconvergent,
        total: reps,
    }
}

/// Sample skewness m₃ / m₂^{3/2} with central moments mᵣ = (1/n)Σ(v−v̄)ʳ.
pub fn skewness(values: &[f64]) -> Result<f64, SamplingError> {
    let n = values.len();
    if n < 3 {
        return Err(SamplingError::DegenerateSample);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    for &v in values {
        let d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n as f64;
    m3 /= n as f64;
    if m2 < 1e-300 {
        return Err(SamplingError::DegenerateSample);
    }
    Ok(m3 / m2.powf(1.5))
}

/// Precomputed pieces of the Edgeworth density for one set of moments:
/// Cholesky whitening, the third cumulants in whitened coordinates, and the
/// Gaussian normalizing constant. Build once, evaluate on a grid.
#[derive(Debug, Clone)]
pub struct EdgeworthExpansion {
    mu: Vec<f64>,
    chol: CholeskyFactor,
    kbar: Cumulant3,
    norm: f64,
}

impl EdgeworthExpansion {
    pub fn new(m: &ModelMoments) -> Result<Self, SamplingError> {
        let d = m.mu.len();
        let chol = cholesky(&m.sigma)?;

        // columns of L^{-1}, so linv[j][a] = (L^{-1})_{a j}
        let linv: Vec<Vec<f64>> = (0..d)
            .map(|j| {
                let mut e = vec![0.0; d];
                e[j] = 1.0;
                chol.solve_lower(&e)
            })
            .collect();

        // kappa-bar_{abc} = Σ_{ijk} (L^{-1})_{ai} (L^{-1})_{bj} (L^{-1})_{ck} kappa_{ijk}
        let kbar = Cumulant3::from_fn(d, |a, b, c| {
            let mut s = 0.0;
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        s += linv[i][a] * linv[j][b] * linv[k][c] * m.kappa3.get(i, j, k);
                    }
                }
            }
            s
        });

        let norm = (2.0 * std::f64::consts::PI).powf(-(d as f64) / 2.0) / chol.diag_product();
        Ok(EdgeworthExpansion {
            mu: m.mu.clone(),
            chol,
            kbar,
            norm,
        })
    }

    /// Product Hermite polynomial He_{abc}(y) of total degree 3.
    fn hermite3(y: &[f64], a: usize, b: usize, c: usize) -> f64 {
        if a == b && b == c {
            let v = y[a];
            v * v * v - 3.0 * v
        } else if a == b {
            (y[a] * y[a] - 1.0) * y[c]
        } else if a == c {
            (y[a] * y[a] - 1.0) * y[b]
        } else if b == c {
            (y[b] * y[b] - 1.0) * y[a]
        } else {
            y[a] * y[b] * y[c]
        }
    }

    /// φ_Σ(z−μ)·[1 + (1/6)Σ κ̄_{abc} He_{abc}(y)], y the whitened point.
    /// May go negative in far tails; returned raw.
    pub fn density(&self, z: &[f64]) -> f64 {
        let d = self.mu.len();
        assert_eq!(z.len(), d, "point dimension must match moments");
        let diff: Vec<f64> = z.iter().zip(&self.mu).map(|(a, b)| a - b).collect();
        let y = self.chol.solve_lower(&diff);
        let quad: f64 = y.iter().map(|v| v * v).sum();
        let phi = self.norm * (-0.5 * quad).exp();

        let mut corr = 0.0;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let k = self.kbar.get(a, b, c);
                    if k != 0.0 {
                        corr += k * Self::hermite3(&y, a, b, c);
                    }
                }
            }
        }
        phi * (1.0 + corr / 6.0)
    }
}

/// One-shot Edgeworth density evaluation; see `EdgeworthExpansion` for the
/// grid-friendly form.
pub fn edgeworth_density(z: &[f64], m: &ModelMoments) -> Result<f64, SamplingError> {
    if z.len() != m.mu.len() {
        return Err(SamplingError::DimensionMismatch {
            expected: m.mu.len(),
            got: z.len(),
        });
    }
    Ok(EdgeworthExpansion::new(m)?.density(z))
}
