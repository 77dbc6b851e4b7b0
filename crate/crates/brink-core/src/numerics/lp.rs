//! Dense tableau simplex, specialized to the cone-direction feasibility
//! question this crate asks: is there a nonzero direction making every
//! constraint dot product nonnegative and at least one strictly positive?

/// Outcome of one simplex run.
enum LpOutcome {
    /// optimal value and primal solution
    Optimal(f64, Vec<f64>),
    /// unbounded or pivot budget exhausted; callers treat it as "no answer"
    Failed,
}

struct Tableau {
    rows: usize,
    cols: usize,
    t: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    rc: Vec<f64>,
    value: f64,
    basis: Vec<usize>,
}

const PIVOT_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 100_000;

impl Tableau {
    /// `basis[i]` must index a column that is the i-th unit vector in `t`.
    fn new(t: Vec<Vec<f64>>, rhs: Vec<f64>, c: &[f64], basis: Vec<usize>) -> Self {
        let rows = t.len();
        let cols = c.len();
        let mut rc = c.to_vec();
        let mut value = 0.0;
        for (i, &bj) in basis.iter().enumerate() {
            let cb = c[bj];
            if cb != 0.0 {
                for j in 0..cols {
                    rc[j] -= cb * t[i][j];
                }
                value += cb * rhs[i];
            }
        }
        Tableau {
            rows,
            cols,
            t,
            rhs,
            rc,
            value,
            basis,
        }
    }

    fn solve(mut self) -> LpOutcome {
        for _ in 0..MAX_PIVOTS {
            // Bland's rule: lowest-index improving column
            let Some(enter) = (0..self.cols).find(|&j| self.rc[j] > PIVOT_TOL) else {
                let mut x = vec![0.0; self.cols];
                for (i, &bj) in self.basis.iter().enumerate() {
                    x[bj] = self.rhs[i];
                }
                return LpOutcome::Optimal(self.value, x);
            };
            let mut leave: Option<usize> = None;
            let mut best = f64::INFINITY;
            for i in 0..self.rows {
                if self.t[i][enter] > PIVOT_TOL {
                    let ratio = self.rhs[i] / self.t[i][enter];
                    let better = ratio < best - 1e-15
                        || (ratio <= best + 1e-15
                            && leave.is_some_and(|l| self.basis[i] < self.basis[l]));
                    if better {
                        best = ratio;
                        leave = Some(i);
                    }
                }
            }
            let Some(li) = leave else {
                return LpOutcome::Failed;
            };
            self.pivot(li, enter);
        }
        LpOutcome::Failed
    }

    fn pivot(&mut self, li: usize, enter: usize) {
        let p = self.t[li][enter];
        for v in self.t[li].iter_mut() {
            *v /= p;
        }
        self.rhs[li] /= p;
        for i in 0..self.rows {
            if i == li {
                continue;
            }
            let f = self.t[i][enter];
            if f != 0.0 {
                for j in 0..self.cols {
                    self.t[i][j] -= f * self.t[li][j];
                }
                self.t[i][enter] = 0.0;
                self.rhs[i] -= f * self.rhs[li];
                if self.rhs[i] < 0.0 && self.rhs[i] > -1e-12 {
                    // roundoff guard; true infeasibility cannot arise here
                    self.rhs[i] = 0.0;
                }
            }
        }
        let f = self.rc[enter];
        if f != 0.0 {
            for j in 0..self.cols {
                self.rc[j] -= f * self.t[li][j];
            }
            self.rc[enter] = 0.0;
            self.value += f * self.rhs[li];
        }
        self.basis[li] = enter;
    }
}

/// Stage 1: maximize the minimum slack s over the box gamma in [-1,1]^d.
/// Columns: u(d) | v(d) | s | r(n) | pu(d) | pv(d) | ps, with gamma = u - v.
fn max_min_slack(rows: &[Vec<f64>], d: usize) -> LpOutcome {
    let n = rows.len();
    let cols = n + 4 * d + 2;
    let s_col = 2 * d;
    let r0 = 2 * d + 1;
    let pu0 = r0 + n;
    let pv0 = pu0 + d;
    let ps = pv0 + d;
    let s_ub = (d as f64).sqrt() + 1.0;

    let mut t = vec![vec![0.0; cols]; n + 2 * d + 1];
    let mut rhs = vec![0.0; n + 2 * d + 1];
    let mut basis = Vec::with_capacity(n + 2 * d + 1);
    for (i, a) in rows.iter().enumerate() {
        for j in 0..d {
            t[i][j] = -a[j];
            t[i][d + j] = a[j];
        }
        t[i][s_col] = 1.0;
        t[i][r0 + i] = 1.0;
        basis.push(r0 + i);
    }
    for j in 0..d {
        t[n + j][j] = 1.0;
        t[n + j][pu0 + j] = 1.0;
        rhs[n + j] = 1.0;
        basis.push(pu0 + j);
        t[n + d + j][d + j] = 1.0;
        t[n + d + j][pv0 + j] = 1.0;
        rhs[n + d + j] = 1.0;
        basis.push(pv0 + j);
    }
    t[n + 2 * d][s_col] = 1.0;
    t[n + 2 * d][ps] = 1.0;
    rhs[n + 2 * d] = s_ub;
    basis.push(ps);

    let mut c = vec![0.0; cols];
    c[s_col] = 1.0;
    Tableau::new(t, rhs, &c, basis).solve()
}

/// Stage 2: maximize the total slack subject to every slack nonnegative.
/// Positive optimum iff some direction satisfies all constraints with at
/// least one strict (a sum of nonnegative terms is positive iff one is).
fn max_total_slack(rows: &[Vec<f64>], d: usize) -> LpOutcome {
    let n = rows.len();
    let cols = n + 4 * d;
    let r0 = 2 * d;
    let pu0 = r0 + n;
    let pv0 = pu0 + d;

    let mut t = vec![vec![0.0; cols]; n + 2 * d];
    let mut rhs = vec![0.0; n + 2 * d];
    let mut basis = Vec::with_capacity(n + 2 * d);
    for (i, a) in rows.iter().enumerate() {
        for j in 0..d {
            t[i][j] = -a[j];
            t[i][d + j] = a[j];
        }
        t[i][r0 + i] = 1.0;
        basis.push(r0 + i);
    }
    for j in 0..d {
        t[n + j][j] = 1.0;
        t[n + j][pu0 + j] = 1.0;
        rhs[n + j] = 1.0;
        basis.push(pu0 + j);
        t[n + d + j][d + j] = 1.0;
        t[n + d + j][pv0 + j] = 1.0;
        rhs[n + d + j] = 1.0;
        basis.push(pv0 + j);
    }

    let mut c = vec![0.0; cols];
    for i in 0..n {
        c[r0 + i] = 1.0;
    }
    Tableau::new(t, rhs, &c, basis).solve()
}

fn gamma_from(x: &[f64], d: usize) -> Vec<f64> {
    (0..d).map(|j| x[j] - x[d + j]).collect()
}

fn unit(mut g: Vec<f64>) -> Option<Vec<f64>> {
    let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm <= 1e-12 {
        return None;
    }
    for v in g.iter_mut() {
        *v /= norm;
    }
    Some(g)
}

fn satisfies(rows: &[Vec<f64>], g: &[f64]) -> bool {
    let mut max_dot = 0.0f64;
    for a in rows {
        let dot: f64 = a.iter().zip(g).map(|(x, y)| x * y).sum();
        if dot < -1e-9 {
            return false;
        }
        max_dot = max_dot.max(dot);
    }
    max_dot > 1e-10
}

/// Searches for a unit direction γ with a_iᵀγ ≥ 0 for every constraint and
/// a_iᵀγ > 0 for at least one. Returns None when only γ = 0 works.
///
/// Two LP stages over the box γ ∈ [−1,1]^D: first maximize the minimum slack
/// (positive optimum means every constraint can hold strictly); if that
/// optimum is zero, maximize the total slack with each slack kept
/// nonnegative, which is positive exactly when a direction with at least one
/// strict inequality exists. Constraint rows are scaled to unit length first
/// and zero rows dropped; the returned direction is verified by substitution.
pub fn lp_feasible(constraints: &[Vec<f64>]) -> Option<Vec<f64>> {
    let d = constraints.first()?.len();
    if d == 0 {
        return None;
    }
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(constraints.len());
    for a in constraints {
        assert_eq!(a.len(), d, "constraint dimensions must agree");
        assert!(
            a.iter().all(|v| v.is_finite()),
            "constraints must be finite"
        );
        let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            rows.push(a.iter().map(|v| v / norm).collect());
        }
    }
    if rows.is_empty() {
        // only zero constraints: any gamma satisfies them, but never strictly
        return None;
    }

    if let LpOutcome::Optimal(s, x) = max_min_slack(&rows, d) {
        if s > 1e-10 {
            if let Some(g) = unit(gamma_from(&x, d)) {
                if satisfies(&rows, &g) {
                    return Some(g);
                }
            }
        }
    }
    if let LpOutcome::Optimal(total, x) = max_total_slack(&rows, d) {
        if total > 1e-10 {
            if let Some(g) = unit(gamma_from(&x, d)) {
                if satisfies(&rows, &g) {
                    return Some(g);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(rows: &[Vec<f64>], g: &[f64]) {
        let mut strict = false;
        for a in rows {
            let dot: f64 = a.iter().zip(g).map(|(x, y)| x * y).sum();
            let scale = a.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(dot >= -1e-9 * scale, "violated: {a:?} . {g:?} = {dot}");
            if dot > 1e-10 * scale {
                strict = true;
            }
        }
        assert!(strict, "no strict inequality for {g:?}");
        let norm: f64 = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pinned_first_coordinate() {
        let rows = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]];
        let g = lp_feasible(&rows).expect("feasible");
        check(&rows, &g);
        assert!(g[0].abs() < 1e-9);
        assert!((g[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn opposing_scalars_force_zero() {
        assert_eq!(lp_feasible(&[vec![1.0], vec![-1.0]]), None);
    }

    #[test]
    fn four_way_pin_forces_zero() {
        let rows = vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ];
        assert_eq!(lp_feasible(&rows), None);
    }

    #[test]
    fn open_halfplane_is_feasible() {
        let rows = vec![vec![1.0, 1.0], vec![1.0, 2.0]];
        let g = lp_feasible(&rows).expect("feasible");
        check(&rows, &g);
    }

    #[test]
    fn strictly_separated_cloud() {
        // points on either side of x + 2y = 0, constraints point one way
        let rows = vec![
            vec![1.0, 2.0],
            vec![2.0, 4.0],
            vec![0.5, 1.5],
            vec![3.0, 5.0],
        ];
        let g = lp_feasible(&rows).expect("feasible");
        check(&rows, &g);
    }

    #[test]
    fn zero_rows_are_ignored() {
        let rows = vec![vec![0.0, 0.0], vec![0.0, 1.0]];
        let g = lp_feasible(&rows).expect("feasible");
        check(&[vec![0.0, 1.0]], &g);
    }

    #[test]
    fn all_zero_rows_give_none() {
        assert_eq!(lp_feasible(&[vec![0.0, 0.0]]), None);
    }

    #[test]
    fn higher_dimensional_cone() {
        let rows = vec![
            vec![1.0, 0.0, 0.0, 0.0],
            vec![-1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, -1.0, 0.0],
            vec![0.0, -1.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 2.0],
        ];
        let g = lp_feasible(&rows).expect("feasible");
        check(&rows, &g);
        assert!(g[3] > 0.9, "only the last coordinate is free: {g:?}");
    }
}
