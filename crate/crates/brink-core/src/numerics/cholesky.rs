use super::{NumericsError, SymmetricMatrix};

/// Lower-triangular Cholesky factor L with M = L L'.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    dim: usize,
    lower: Vec<f64>, // row-major, strictly upper part left at zero
}

/// Factors a symmetric positive definite matrix.
///
/// A pivot at or below `dim * 1e-14 * max_abs(m)` fails the factorization;
/// the error carries the offending index and pivot value.
pub fn cholesky(m: &SymmetricMatrix) -> Result<CholeskyFactor, NumericsError> {
    let n = m.dim();
    let floor = n as f64 * 1e-14 * m.max_abs();
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = m.get(j, j);
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if d <= floor {
            return Err(NumericsError::NotPositiveDefinite { index: j, pivot: d });
        }
        let lj = d.sqrt();
        l[j * n + j] = lj;
        for i in (j + 1)..n {
            let mut s = m.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / lj;
        }
    }
    Ok(CholeskyFactor { dim: n, lower: l })
}

impl CholeskyFactor {
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[i * self.dim + j]
    }

    /// Solves L y = b.
    pub fn solve_lower(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.lower[i * n + k] * y[k];
            }
            y[i] = s / self.lower[i * n + i];
        }
        y
    }

    /// Solves L' y = b.
    pub fn solve_upper(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut y = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in (i + 1)..n {
                s -= self.lower[k * n + i] * y[k];
            }
            y[i] = s / self.lower[i * n + i];
        }
        y
    }

    /// Solves (L L') x = b.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        self.solve_upper(&self.solve_lower(b))
    }

    /// Inverse of the factored matrix, assembled column by column.
    pub fn inverse(&self) -> SymmetricMatrix {
        let n = self.dim;
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            cols.push(self.solve(&e));
        }
        // solve() applied to unit vectors can differ across the diagonal in
        // the last bit; symmetrize through the shared upper triangle
        SymmetricMatrix::from_fn(n, |i, j| cols[j][i])
    }

    pub fn det(&self) -> f64 {
        let mut d = 1.0;
        for i in 0..self.dim {
            let lii = self.lower[i * self.dim + i];
            d *= lii * lii;
        }
        d
    }

    /// Product of the diagonal entries, i.e. sqrt(det).
    pub fn diag_product(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_factor_is_sqrt() {
        let m = SymmetricMatrix::diagonal(&[4.0, 9.0]);
        let f = cholesky(&m).unwrap();
        assert_eq!(f.get(0, 0), 2.0);
        assert_eq!(f.get(1, 1), 3.0);
        assert_eq!(f.get(1, 0), 0.0);
        assert_eq!(f.det(), 36.0);
    }

    #[test]
    fn factor_reconstructs_matrix() {
        let m = SymmetricMatrix::from_rows(&[
            vec![4.0, 2.0, 0.6],
            vec![2.0, 5.0, 1.0],
            vec![0.6, 1.0, 3.0],
        ])
        .unwrap();
        let f = cholesky(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += f.get(i, k) * f.get(j, k);
                }
                assert!((s - m.get(i, j)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn solve_inverts_multiplication() {
        let m = SymmetricMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let f = cholesky(&m).unwrap();
        let x = [0.3, -0.7];
        let b = m.mul_vec(&x);
        let got = f.solve(&b);
        assert!((got[0] - x[0]).abs() < 1e-15);
        assert!((got[1] - x[1]).abs() < 1e-15);
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let m = SymmetricMatrix::from_rows(&[
            vec![3.0, 1.0, 0.2],
            vec![1.0, 4.0, -0.5],
            vec![0.2, -0.5, 2.0],
        ])
        .unwrap();
        let inv = cholesky(&m).unwrap().inverse();
        for i in 0..3 {
            for j in 0..3 {
                let s: f64 = (0..3).map(|k| inv.get(i, k) * m.get(k, j)).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((s - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn indefinite_matrix_is_rejected_with_pivot_index() {
        let m = SymmetricMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        match cholesky(&m) {
            Err(NumericsError::NotPositiveDefinite { index, pivot }) => {
                assert_eq!(index, 1);
                assert!(pivot < 0.0);
            }
            other => panic!("expected NotPositiveDefinite, got {other:?}"),
        }
    }

    #[test]
    fn semidefinite_matrix_is_rejected() {
        // rank one: [1, 1; 1, 1]
        let m = SymmetricMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(cholesky(&m).is_err());
    }
}
