//! Geometry of the closed probability simplex: Fisher information for the
//! log-odds parametrization, its spectrum through the rank-one secular
//! equation, and closed-form squared distances to boundary faces.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::numerics::SymmetricMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MultinomialError {
    #[error("probability vector needs at least two cells, got {0}")]
    TooFewCells(usize),
    #[error("negative probability {value} at cell {index}")]
    NegativeProbability { index: usize, value: f64 },
    #[error("non-finite probability at cell {index}")]
    NonFiniteProbability { index: usize },
    #[error("probabilities sum to zero; cannot normalize")]
    ZeroTotalMass,
    #[error("reference cell {index} out of range for {len} cells")]
    ReferenceOutOfRange { index: usize, len: usize },
    #[error("face index set is empty")]
    EmptyFace,
    #[error("face index {index} outside 1..={k}")]
    FaceIndexOutOfRange { index: usize, k: usize },
    #[error("base point must be interior; cell {index} is zero")]
    NotInterior { index: usize },
}

/// A point (π_0, …, π_k) of the closed simplex, k ≥ 1. Zeros are allowed;
/// the vector is renormalized to unit sum on construction. Cell 0 is the
/// reference cell omitted from the natural parametrization.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
}

impl ProbabilityVector {
    /// Cell 0 of `weights` is the reference cell.
    pub fn new(weights: &[f64]) -> Result<Self, MultinomialError> {
        Self::with_reference(weights, 0)
    }

    /// Moves `reference` to the front; the remaining cells keep their
    /// relative order.
    pub fn with_reference(weights: &[f64], reference: usize) -> Result<Self, MultinomialError> {
        if weights.len() < 2 {
            return Err(MultinomialError::TooFewCells(weights.len()));
        }
        if reference >= weights.len() {
            return Err(MultinomialError::ReferenceOutOfRange {
                index: reference,
                len: weights.len(),
            });
        }
        let mut total = 0.0;
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(MultinomialError::NonFiniteProbability { index: i });
            }
            if w < 0.0 {
                return Err(MultinomialError::NegativeProbability { index: i, value: w });
            }
            total += w;
        }
        if total <= 0.0 {
            return Err(MultinomialError::ZeroTotalMass);
        }
        let mut probs = Vec::with_capacity(weights.len());
        probs.push(weights[reference] / total);
        probs.extend(
            weights
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != reference)
                .map(|(_, &w)| w / total),
        );
        Ok(ProbabilityVector { probs })
    }

    /// Number of free cells; the vector has k + 1 entries.
    #[inline]
    pub fn k(&self) -> usize {
        self.probs.len() - 1
    }

    #[inline]
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    /// View of (π_1, …, π_k), the coordinates carrying the natural
    /// parametrization.
    #[inline]
    pub fn tail(&self) -> &[f64] {
        &self.probs[1..]
    }

    pub fn is_interior(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0)
    }
}

/// Cells of {1, …, k} forced to zero; identifies a boundary face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceIndexSet {
    indices: BTreeSet<usize>,
}

impl FaceIndexSet {
    pub fn new(
        indices: impl IntoIterator<Item = usize>,
        k: usize,
    ) -> Result<Self, MultinomialError> {
        let indices: BTreeSet<usize> = indices.into_iter().collect();
        if indices.is_empty() {
            return Err(MultinomialError::EmptyFace);
        }
        for &i in &indices {
            if i < 1 || i > k {
                return Err(MultinomialError::FaceIndexOutOfRange { index: i, k });
            }
        }
        Ok(FaceIndexSet { indices })
    }

    #[inline]
    pub fn indices(&self) -> &BTreeSet<usize> {
        &self.indices
    }
}

/// Spectrum of the Fisher information, organized by the rank-one structure:
/// each distinct value λ_i of (π_1, …, π_k) with multiplicity m_i keeps
/// λ_i as an eigenvalue of multiplicity m_i − 1, and g simple eigenvalues
/// interlace the distinct values from above.
#[derive(Debug, Clone)]
pub struct FisherSpectrum {
    /// λ̃_1 > … > λ̃_g, one per distinct probability value, descending.
    pub simple_eigenvalues: Vec<f64>,
    /// (λ_i, m_i − 1) for groups with m_i > 1, descending in λ_i.
    pub repeated_eigenvalues: Vec<(f64, usize)>,
    /// (λ_i, m_i), the distinct values of the tail probabilities, descending.
    pub distinct_probs: Vec<(f64, usize)>,
}

impl FisherSpectrum {
    /// All k eigenvalues as a multiset, sorted descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut all = self.simple_eigenvalues.clone();
        for &(v, m) in &self.repeated_eigenvalues {
            all.extend(std::iter::repeat_n(v, m));
        }
        all.sort_by(|a, b| b.partial_cmp(a).unwrap());
        all
    }
}

/// Per-observation Fisher information of the natural (log-odds) parameters:
/// diag(π_(0)) − π_(0)π_(0)ᵀ over the k non-reference cells.
pub fn fisher_information(pi: &ProbabilityVector) -> SymmetricMatrix {
    let v = pi.tail();
    SymmetricMatrix::from_fn(v.len(), |i, j| {
        if i == j {
            v[i] * (1.0 - v[i])
        } else {
            -v[i] * v[j]
        }
    })
}

/// Relative tolerance used to decide that two tail probabilities are the
/// same distinct value.
const GROUP_TOL: f64 = 1e-12;

fn group_tail(tail: &[f64]) -> (Vec<(f64, usize)>, usize) {
    let mut sorted: Vec<f64> = tail.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let zeros = sorted.iter().filter(|&&v| v <= 0.0).count();

    let mut groups: Vec<(f64, usize)> = Vec::new();
    let mut members: Vec<f64> = Vec::new();
    for &v in sorted.iter().take(sorted.len() - zeros) {
        match members.first() {
            Some(&lead) if (lead - v) <= GROUP_TOL * lead => members.push(v),
            Some(_) => {
                groups.push((
                    members.iter().sum::<f64>() / members.len() as f64,
                    members.len(),
                ));
                members = vec![v];
            }
            None => members = vec![v],
        }
    }
    if !members.is_empty() {
        groups.push((
            members.iter().sum::<f64>() / members.len() as f64,
            members.len(),
        ));
    }
    (groups, zeros)
}

/// 1 − Σ_i m_i λ_i² / (λ_i − λ); strictly decreasing between consecutive
/// distinct values, one simple eigenvalue per sign change.
fn secular(groups: &[(f64, usize)], lambda: f64) -> f64 {
    let mut f = 1.0;
    for &(v, m) in groups {
        f -= m as f64 * v * v / (v - lambda);
    }
    f
}

fn bisect_root(groups: &[(f64, usize)], mut lo: f64, mut hi: f64) -> f64 {
    // invariant: secular > 0 just above lo, < 0 just below hi
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if secular(groups, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Spectrum of `fisher_information(pi)` via the secular equation of the
/// diagonal-minus-rank-one structure, without forming the matrix.
pub fn fisher_spectrum(pi: &ProbabilityVector) -> FisherSpectrum {
    let (groups, zeros) = group_tail(pi.tail());

    let mut simple = Vec::with_capacity(groups.len() + 1);
    for (i, &(v, _)) in groups.iter().enumerate() {
        let lo = if i + 1 < groups.len() {
            groups[i + 1].0
        } else {
            0.0
        };
        if i + 1 == groups.len() && secular(&groups, 0.0) <= 0.0 {
            // reference cell has zero mass; the bottom root sits at 0 exactly
            simple.push(0.0);
        } else {
            simple.push(bisect_root(&groups, lo, v));
        }
    }

    let mut repeated: Vec<(f64, usize)> = groups
        .iter()
        .filter(|&&(_, m)| m > 1)
        .map(|&(v, m)| (v, m - 1))
        .collect();

    let mut distinct = groups;
    if zeros > 0 {
        distinct.push((0.0, zeros));
        simple.push(0.0);
        if zeros > 1 {
            repeated.push((0.0, zeros - 1));
        }
    }

    FisherSpectrum {
        simple_eigenvalues: simple,
        repeated_eigenvalues: repeated,
        distinct_probs: distinct,
    }
}

/// Squared Fisher-metric distance from an interior base point to the face
/// with the given cells forced to zero: π_I / (1 − π_I). Returns +infinity
/// once π_I ≥ 1 − 1e−14.
pub fn face_distance_sq(
    pi0: &ProbabilityVector,
    face: &FaceIndexSet,
) -> Result<f64, MultinomialError> {
    for (i, &p) in pi0.probs().iter().enumerate() {
        if p <= 0.0 {
            return Err(MultinomialError::NotInterior { index: i });
        }
    }
    for &i in face.indices() {
        if i > pi0.k() {
            return Err(MultinomialError::FaceIndexOutOfRange {
                index: i,
                k: pi0.k(),
            });
        }
    }
    let pi_i: f64 = face.indices().iter().map(|&i| pi0.get(i)).sum();
    if pi_i >= 1.0 - 1e-14 {
        return Ok(f64::INFINITY);
    }
    Ok(pi_i / (1.0 - pi_i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(w: &[f64]) -> ProbabilityVector {
        ProbabilityVector::new(w).unwrap()
    }

    #[test]
    fn construction_normalizes() {
        let p = pv(&[2.0, 1.0, 1.0]);
        assert_eq!(p.probs(), &[0.5, 0.25, 0.25]);
        assert_eq!(p.k(), 2);
        assert_eq!(p.tail(), &[0.25, 0.25]);
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            ProbabilityVector::new(&[1.0]),
            Err(MultinomialError::TooFewCells(1))
        ));
        assert!(matches!(
            ProbabilityVector::new(&[0.5, -0.1]),
            Err(MultinomialError::NegativeProbability { index: 1, .. })
        ));
        assert!(matches!(
            ProbabilityVector::new(&[0.0, 0.0]),
            Err(MultinomialError::ZeroTotalMass)
        ));
        assert!(matches!(
            ProbabilityVector::new(&[f64::NAN, 1.0]),
            Err(MultinomialError::NonFiniteProbability { index: 0 })
        ));
    }

    #[test]
    fn reference_cell_moves_to_front() {
        let p = ProbabilityVector::with_reference(&[0.2, 0.3, 0.5], 2).unwrap();
        assert_eq!(p.probs(), &[0.5, 0.2, 0.3]);
    }

    #[test]
    fn binomial_fisher_information() {
        let m = fisher_information(&pv(&[0.5, 0.5]));
        assert_eq!(m.dim(), 1);
        assert_eq!(m.get(0, 0), 0.25);
    }

    #[test]
    fn uniform_trinomial_fisher_information() {
        let m = fisher_information(&pv(&[1.0, 1.0, 1.0]));
        let third = 1.0 / 3.0;
        assert!((m.get(0, 0) - third * (1.0 - third)).abs() < 1e-16);
        assert!((m.get(0, 1) + third * third).abs() < 1e-16);
        assert!((m.get(1, 1) - 2.0 / 9.0).abs() < 1e-16);
    }

    #[test]
    fn boundary_point_gives_singular_information() {
        let m = fisher_information(&pv(&[0.5, 0.5, 0.0]));
        assert_eq!(m.get(0, 0), 0.25);
        assert_eq!(m.get(0, 1), 0.0);
        assert_eq!(m.get(1, 1), 0.0);
    }

    #[test]
    fn uniform_trinomial_spectrum() {
        let s = fisher_spectrum(&pv(&[1.0, 1.0, 1.0]));
        assert_eq!(s.distinct_probs.len(), 1);
        assert_eq!(s.distinct_probs[0].1, 2);
        assert_eq!(s.simple_eigenvalues.len(), 1);
        assert!((s.simple_eigenvalues[0] - 1.0 / 9.0).abs() < 1e-14);
        assert_eq!(s.repeated_eigenvalues.len(), 1);
        assert!((s.repeated_eigenvalues[0].0 - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.repeated_eigenvalues[0].1, 1);
    }

    #[test]
    fn binomial_spectrum_is_the_variance() {
        let s = fisher_spectrum(&pv(&[0.5, 0.5]));
        assert_eq!(s.simple_eigenvalues.len(), 1);
        assert!((s.simple_eigenvalues[0] - 0.25).abs() < 1e-15);
        assert!(s.repeated_eigenvalues.is_empty());
    }

    #[test]
    fn two_distinct_values_interlace() {
        let s = fisher_spectrum(&pv(&[0.5, 0.3, 0.2]));
        assert_eq!(s.simple_eigenvalues.len(), 2);
        let (t1, t2) = (s.simple_eigenvalues[0], s.simple_eigenvalues[1]);
        assert!(0.3 > t1 && t1 > 0.2, "top root escaped its gap: {t1}");
        assert!(
            (0.0..0.2).contains(&t2),
            "bottom root escaped its gap: {t2}"
        );
    }

    #[test]
    fn spectrum_with_zero_cells() {
        let s = fisher_spectrum(&pv(&[0.5, 0.5, 0.0, 0.0]));
        let eig = s.eigenvalues();
        assert_eq!(eig.len(), 3);
        assert!((eig[0] - 0.25).abs() < 1e-15);
        assert_eq!(eig[1], 0.0);
        assert_eq!(eig[2], 0.0);
    }

    #[test]
    fn face_distance_closed_form() {
        let p = pv(&[1.0, 1.0, 1.0]);
        let f = FaceIndexSet::new([1], 2).unwrap();
        assert!((face_distance_sq(&p, &f).unwrap() - 0.5).abs() < 1e-15);

        let p = pv(&[0.5, 0.25, 0.25]);
        let f = FaceIndexSet::new([1, 2], 2).unwrap();
        assert!((face_distance_sq(&p, &f).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn face_distance_requires_interior() {
        let p = pv(&[0.5, 0.5, 0.0]);
        let f = FaceIndexSet::new([1], 2).unwrap();
        assert!(matches!(
            face_distance_sq(&p, &f),
            Err(MultinomialError::NotInterior { index: 2 })
        ));
    }

    #[test]
    fn face_distance_saturates_to_infinity() {
        let p = pv(&[1e-15, 0.5, 0.5]);
        let f = FaceIndexSet::new([1, 2], 2).unwrap();
        assert_eq!(face_distance_sq(&p, &f).unwrap(), f64::INFINITY);
    }

    #[test]
    fn face_validation() {
        assert!(matches!(
            FaceIndexSet::new([], 3),
            Err(MultinomialError::EmptyFace)
        ));
        assert!(matches!(
            FaceIndexSet::new([0], 3),
            Err(MultinomialError::FaceIndexOutOfRange { index: 0, k: 3 })
        ));
        assert!(matches!(
            FaceIndexSet::new([4], 3),
            Err(MultinomialError::FaceIndexOutOfRange { index: 4, k: 3 })
        ));
    }
}
