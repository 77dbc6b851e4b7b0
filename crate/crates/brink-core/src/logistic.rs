//! Logistic regression as a D-parameter exponential family: datasets,
//! separation detection, Newton-Raphson fitting, and the model cumulants
//! feeding the diagnostic and the Edgeworth expansion.

use thiserror::Error;

use crate::numerics::{cholesky, lp_feasible, NumericsError, SymmetricMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LogisticError {
    #[error("dataset has no rows")]
    EmptyDataset,
    #[error("row {row} has {got} columns, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("non-finite design entry at row {row}, column {col}")]
    NonFiniteValue { row: usize, col: usize },
    #[error("need at least as many rows as columns: {n} rows, {d} columns")]
    TooFewRows { n: usize, d: usize },
    #[error("design matrix is rank deficient (column {col} dependent at tolerance {tolerance:e})")]
    RankDeficient { col: usize, tolerance: f64 },
    #[error("{rows} design rows but {responses} responses")]
    ResponseLengthMismatch { rows: usize, responses: usize },
    #[error("no intercept column of ones found")]
    NoInterceptColumn,
    #[error("coefficient vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("Newton iteration did not converge in {iterations} steps (score norm {score_norm:e})")]
    NoConvergence {
        iterations: usize,
        score_norm: f64,
        last_beta: Vec<f64>,
    },
}

/// Design matrix X (N×D, stored by rows) with binary responses t.
///
/// Construction enforces N ≥ D ≥ 1 and full column rank, checked by
/// modified Gram-Schmidt with relative tolerance 1e−10.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: Vec<Vec<f64>>,
    t: Vec<bool>,
}

const RANK_TOL: f64 = 1e-10;

impl Dataset {
    pub fn new(x: Vec<Vec<f64>>, t: Vec<bool>) -> Result<Self, LogisticError> {
        let n = x.len();
        if n == 0 {
            return Err(LogisticError::EmptyDataset);
        }
        let d = x[0].len();
        for (i, row) in x.iter().enumerate() {
            if row.len() != d {
                return Err(LogisticError::RaggedRow {
                    row: i,
                    expected: d,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(LogisticError::NonFiniteValue { row: i, col: j });
                }
            }
        }
        if d == 0 || n < d {
            return Err(LogisticError::TooFewRows { n, d });
        }
        if t.len() != n {
            return Err(LogisticError::ResponseLengthMismatch {
                rows: n,
                responses: t.len(),
            });
        }

        // modified Gram-Schmidt over columns; a vanishing residual norm
        // relative to the original column flags dependence
        let mut q: Vec<Vec<f64>> = Vec::with_capacity(d);
        for j in 0..d {
            let col: Vec<f64> = (0..n).map(|i| x[i][j]).collect();
            let scale = col.iter().map(|v| v * v).sum::<f64>().sqrt();
            let mut v = col;
            for prev in &q {
                for _ in 0..2 {
                    let proj: f64 = prev.iter().zip(&v).map(|(a, b)| a * b).sum();
                    for (vi, pi) in v.iter_mut().zip(prev) {
                        *vi -= proj * pi;
                    }
                }
            }
            let norm = v.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm <= RANK_TOL * scale.max(f64::MIN_POSITIVE) {
                return Err(LogisticError::RankDeficient {
                    col: j,
                    tolerance: RANK_TOL,
                });
            }
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            q.push(v);
        }

        Ok(Dataset { x, t })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.x[0].len()
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i]
    }

    #[inline]
    pub fn design(&self) -> &[Vec<f64>] {
        &self.x
    }

    #[inline]
    pub fn responses(&self) -> &[bool] {
        &self.t
    }

    /// Same design, new responses. Skips the rank check: the design is
    /// unchanged, so the invariant carries over.
    pub fn with_responses(&self, t: Vec<bool>) -> Result<Self, LogisticError> {
        if t.len() != self.n() {
            return Err(LogisticError::ResponseLengthMismatch {
                rows: self.n(),
                responses: t.len(),
            });
        }
        Ok(Dataset {
            x: self.x.clone(),
            t,
        })
    }
}

/// Outcome of maximum-likelihood fitting.
#[derive(Debug, Clone)]
pub enum FitResult {
    Interior(InteriorFit),
    /// The likelihood increases without bound along `recession`; the MLE
    /// sits on the boundary polytope.
    Boundary {
        recession: Vec<f64>,
    },
}

#[derive(Debug, Clone)]
pub struct InteriorFit {
    pub beta_hat: Vec<f64>,
    /// fitted p_i = logistic(x_i'beta_hat)
    pub probs: Vec<f64>,
    /// observed information X'WX, W = diag(p(1-p))
    pub fisher: SymmetricMatrix,
    pub iterations: usize,
}

/// Fully symmetric D×D×D array of third cumulants, dense storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Cumulant3 {
    dim: usize,
    data: Vec<f64>,
}

impl Cumulant3 {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; dim * dim * dim];
        for a in 0..dim {
            for b in a..dim {
                for c in b..dim {
                    let v = f(a, b, c);
                    for (i, j, k) in [
                        (a, b, c),
                        (a, c, b),
                        (b, a, c),
                        (b, c, a),
                        (c, a, b),
                        (c, b, a),
                    ] {
                        data[(i * dim + j) * dim + k] = v;
                    }
                }
            }
        }
        Cumulant3 { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[(a * self.dim + b) * self.dim + c]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &v| m.max(v.abs()))
    }
}

/// Mean, covariance, and third cumulants of the sufficient statistic X't
/// under the model at a fixed coefficient vector.
#[derive(Debug, Clone)]
pub struct ModelMoments {
    pub mu: Vec<f64>,
    pub sigma: SymmetricMatrix,
    pub kappa3: Cumulant3,
}

/// Numerically stable logistic function.
#[inline]
pub fn logistic(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

/// log(1 + e^u) without overflow for large |u|.
#[inline]
fn log1pexp(u: f64) -> f64 {
    if u > 30.0 {
        u + (-u).exp().ln_1p()
    } else {
        u.exp().ln_1p()
    }
}

/// Mean-centers every non-intercept column; the intercept column (exact
/// ones) is found automatically and left untouched. Returns the centered
/// dataset and the per-column subtracted offsets (0 for the intercept).
pub fn center_covariates(d: &Dataset) -> Result<(Dataset, Vec<f64>), LogisticError> {
    let n = d.n();
    let cols = d.d();
    let intercept = (0..cols)
        .find(|&j| (0..n).all(|i| d.row(i)[j] == 1.0))
        .ok_or(LogisticError::NoInterceptColumn)?;

    let mut offsets = vec![0.0; cols];
    for (j, off) in offsets.iter_mut().enumerate() {
        if j != intercept {
            *off = (0..n).map(|i| d.row(i)[j]).sum::<f64>() / n as f64;
        }
    }
    let x = (0..n)
        .map(|i| {
            d.row(i)
                .iter()
                .zip(&offsets)
                .map(|(v, off)| v - off)
                .collect()
        })
        .collect();
    Ok((
        Dataset {
            x,
            t: d.responses().to_vec(),
        },
        offsets,
    ))
}

/// The sufficient statistic X't; integer-exact for integer designs.
pub fn suff_stat(d: &Dataset) -> Vec<f64> {
    let mut s = vec![0.0; d.d()];
    for i in 0..d.n() {
        if d.responses()[i] {
            for (sj, xj) in s.iter_mut().zip(d.row(i)) {
                *sj += xj;
            }
        }
    }
    s
}

/// Looks for a direction of recession: a unit γ with (2t_i − 1)·x_i'γ ≥ 0
/// for every observation and > 0 for at least one. Some(γ) means the MLE
/// does not exist in the interior (complete or quasi-complete separation).
pub fn detect_separation(d: &Dataset) -> Option<Vec<f64>> {
    let signed: Vec<Vec<f64>> = (0..d.n())
        .map(|i| {
            let s = if d.responses()[i] { 1.0 } else { -1.0 };
            d.row(i).iter().map(|&v| s * v).collect()
        })
        .collect();
    lp_feasible(&signed)
}

/// Bernoulli log-likelihood Σ t_i·x_i'β − log(1 + exp(x_i'β)).
pub fn log_likelihood(d: &Dataset, beta: &[f64]) -> f64 {
    assert_eq!(beta.len(), d.d(), "coefficient length must match design");
    let mut ll = 0.0;
    for i in 0..d.n() {
        let eta: f64 = d.row(i).iter().zip(beta).map(|(x, b)| x * b).sum();
        ll += if d.responses()[i] { eta } else { 0.0 };
        ll -= log1pexp(eta);
    }
    ll
}

fn score(d: &Dataset, probs: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; d.d()];
    for i in 0..d.n() {
        let r = (d.responses()[i] as u8 as f64) - probs[i];
        for (gj, xj) in g.iter_mut().zip(d.row(i)) {
            *gj += r * xj;
        }
    }
    g
}

fn fitted_probs(d: &Dataset, beta: &[f64]) -> Vec<f64> {
    (0..d.n())
        .map(|i| logistic(d.row(i).iter().zip(beta).map(|(x, b)| x * b).sum()))
        .collect()
}

fn observed_information(d: &Dataset, probs: &[f64]) -> SymmetricMatrix {
    SymmetricMatrix::from_fn(d.d(), |a, b| {
        (0..d.n())
            .map(|i| probs[i] * (1.0 - probs[i]) * d.row(i)[a] * d.row(i)[b])
            .sum()
    })
}

/// Maximum-likelihood fit with the default iteration budget (100) and
/// score tolerance (1e−10).
pub fn fit_mle(d: &Dataset) -> Result<FitResult, LogisticError> {
    fit_mle_opts(d, 100, 1e-10)
}

/// Separation is ruled out first via the recession LP, so boundary cases
/// return `Boundary` instead of a diverging iteration. Interior fits run
/// Newton-Raphson from β = 0 with step-halving (at most 30 halvings per
/// step) and stop once ‖X'(t − p)‖_∞ ≤ tol.
pub fn fit_mle_opts(d: &Dataset, max_iter: usize, tol: f64) -> Result<FitResult, LogisticError> {
    if let Some(gamma) = detect_separation(d) {
        return Ok(FitResult::Boundary { recession: gamma });
    }

    let dim = d.d();
    let mut beta = vec![0.0; dim];
    let mut probs = fitted_probs(d, &beta);
    let mut ll = log_likelihood(d, &beta);

    for iter in 1..=max_iter {
        let g = score(d, &probs);
        let score_norm = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if score_norm <= tol {
            return Ok(FitResult::Interior(InteriorFit {
                fisher: observed_information(d, &probs),
                beta_hat: beta,
                probs,
                iterations: iter - 1,
            }));
        }

        let info = observed_information(d, &probs);
        let step = match cholesky(&info) {
            Ok(f) => f.solve(&g),
            // a collapsed information matrix this far from convergence
            // behaves like separation that the LP ruled out; report rather
            // than iterate blindly
            Err(NumericsError::NotPositiveDefinite { .. }) => {
                return Err(LogisticError::NoConvergence {
                    iterations: iter,
                    score_norm,
                    last_beta: beta,
                });
            }
            Err(_) => unreachable!("information matrix is square and symmetric"),
        };

        // near the optimum a Newton step improves the likelihood by less
        // than one ulp; accepting within rounding noise keeps the final
        // quadratic-convergence step from being rejected
        let slack = 1e-12 * (1.0 + ll.abs());
        let mut lambda = 1.0;
        for _ in 0..=30 {
            let trial: Vec<f64> = beta
                .iter()
                .zip(&step)
                .map(|(b, s)| b + lambda * s)
                .collect();
            let trial_ll = log_likelihood(d, &trial);
            if trial_ll >= ll - slack || lambda <= 2.0f64.powi(-30) {
                beta = trial;
                ll = trial_ll;
                break;
            }
            lambda *= 0.5;
        }
        probs = fitted_probs(d, &beta);
    }

    let g = score(d, &probs);
    let score_norm = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if score_norm <= tol {
        return Ok(FitResult::Interior(InteriorFit {
            fisher: observed_information(d, &probs),
            beta_hat: beta,
            probs,
            iterations: max_iter,
        }));
    }
    Err(LogisticError::NoConvergence {
        iterations: max_iter,
        score_norm,
        last_beta: beta,
    })
}

/// Cumulants of the sufficient statistic at fixed β: mean X'p, covariance
/// X'diag(p(1−p))X, and third cumulants weighted by p(1−p)(1−2p).
/// The design is assumed full rank (as enforced by `Dataset`).
pub fn model_moments(design: &[Vec<f64>], beta: &[f64]) -> ModelMoments {
    let dim = beta.len();
    let p: Vec<f64> = design
        .iter()
        .map(|row| {
            assert_eq!(row.len(), dim, "design width must match coefficient length");
            logistic(row.iter().zip(beta).map(|(x, b)| x * b).sum())
        })
        .collect();

    let mut mu = vec![0.0; dim];
    for (row, &pi) in design.iter().zip(&p) {
        for (m, x) in mu.iter_mut().zip(row) {
            *m += pi * x;
        }
    }
    let sigma = SymmetricMatrix::from_fn(dim, |a, b| {
        design
            .iter()
            .zip(&p)
            .map(|(row, &pi)| pi * (1.0 - pi) * row[a] * row[b])
            .sum()
    });
    let kappa3 = Cumulant3::from_fn(dim, |a, b, c| {
        design
            .iter()
            .zip(&p)
            .map(|(row, &pi)| pi * (1.0 - pi) * (1.0 - 2.0 * pi) * row[a] * row[b] * row[c])
            .sum()
    });
    ModelMoments { mu, sigma, kappa3 }
}
