use super::LinalgError;

/// Symmetric tridiagonal matrix stored by its diagonal and one off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiag {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl Tridiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self, LinalgError> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(LinalgError::Shape {
                diag: diag.len(),
                offdiag: offdiag.len(),
            });
        }
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let m = self.dim();
        let mut out: Vec<f64> = self.diag.iter().zip(v).map(|(d, x)| d * x).collect();
        for i in 0..m - 1 {
            out[i] += self.offdiag[i] * v[i + 1];
            out[i + 1] += self.offdiag[i] * v[i];
        }
        out
    }

    /// Max absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        let m = self.dim();
        (0..m)
            .map(|i| {
                let left = if i > 0 {
                    self.offdiag[i - 1].abs()
                } else {
                    0.0
                };
                let right = if i + 1 < m {
                    self.offdiag[i].abs()
                } else {
                    0.0
                };
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let m = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..m {
            let left = if i > 0 {
                self.offdiag[i - 1].abs()
            } else {
                0.0
            };
            let right = if i + 1 < m {
                self.offdiag[i].abs()
            } else {
                0.0
            };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x`, from the signs of the
    /// `LDL'` pivots of `T - xI` (Sylvester inertia).
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt() * (1.0 + self.inf_norm());
        let mut count = 0;
        let mut d = self.diag[0] - x;
        for i in 0..self.dim() {
            if i > 0 {
                d = self.diag[i] - x - self.offdiag[i - 1] * self.offdiag[i - 1] / d;
            }
            if d == 0.0 {
                d = -tiny;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based) by Sturm-sequence bisection.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.dim(), "eigenvalue index {k} out of range");
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * (1.0 + lo.abs().max(hi.abs()));
        lo -= pad;
        hi += pad;
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn smallest_eig(&self) -> f64 {
        self.eigenvalue(0)
    }

    pub fn largest_eig(&self) -> f64 {
        self.eigenvalue(self.dim() - 1)
    }

    /// `max(|xi_min|, |xi_max|)`, the spectral norm.
    pub fn spectral_norm(&self) -> f64 {
        self.smallest_eig().abs().max(self.largest_eig().abs())
    }

    /// `LDL'` factorization of `T + lam I`; fails on a nonpositive pivot.
    pub fn factor_shifted(&self, lam: f64) -> Result<ShiftedLdl, LinalgError> {
        let m = self.dim();
        let mut d = Vec::with_capacity(m);
        let mut l = Vec::with_capacity(m.saturating_sub(1));
        let mut pivot = self.diag[0] + lam;
        for i in 0..m {
            if i > 0 {
                let li = self.offdiag[i - 1] / d[i - 1];
                pivot = self.diag[i] + lam - li * self.offdiag[i - 1];
                l.push(li);
            }
            if !(pivot > 0.0) || !pivot.is_finite() {
                return Err(LinalgError::NotPositiveDefinite { index: i, pivot });
            }
            d.push(pivot);
        }
        Ok(ShiftedLdl { d, l })
    }

    /// A unit eigenvector for the leftmost eigenvalue, by inverse iteration
    /// with the positive-definite shift `T - (xi_min - delta) I`.
    pub fn leftmost_eigvec(&self, xi_min: f64) -> Vec<f64> {
        let m = self.dim();
        let scale = 1.0 + self.inf_norm();
        let mut delta = 1e-10 * scale;
        let ldl = loop {
            match self.factor_shifted(-(xi_min - delta)) {
                Ok(f) => break f,
                Err(_) => delta *= 10.0,
            }
        };
        let mut u: Vec<f64> = (0..m).map(|i| 1.0 + 0.1 * i as f64).collect();
        for _ in 0..8 {
            u = ldl.solve(&u);
            let nrm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            u.iter_mut().for_each(|x| *x /= nrm);
        }
        u
    }
}

/// Factor of a positive definite shifted tridiagonal `T + lam I = L D L'`.
#[derive(Debug, Clone)]
pub struct ShiftedLdl {
    d: Vec<f64>,
    l: Vec<f64>,
}

impl ShiftedLdl {
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let m = self.d.len();
        let mut x = rhs.to_vec();
        for i in 1..m {
            x[i] -= self.l[i - 1] * x[i - 1];
        }
        x.iter_mut().zip(&self.d).for_each(|(xi, di)| *xi /= di);
        for i in (0..m - 1).rev() {
            x[i] -= self.l[i] * x[i + 1];
        }
        x
    }

    pub fn pivots(&self) -> &[f64] {
        &self.d
    }
}

/// Leftmost eigenvalue of `t`.
pub fn tridiag_smallest_eig(t: &Tridiag) -> f64 {
    t.smallest_eig()
}

/// Solves `(T + lam I) x = rhs`, counting one factorization in `factorizations`.
pub fn solve_shifted_tridiag(
    t: &Tridiag,
    lam: f64,
    rhs: &[f64],
    factorizations: &mut usize,
) -> Result<Vec<f64>, LinalgError> {
    if rhs.len() != t.dim() {
        return Err(LinalgError::Length {
            expected: t.dim(),
            got: rhs.len(),
        });
    }
    *factorizations += 1;
    Ok(t.factor_shifted(lam)?.solve(rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, SymmetricEigen};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense(t: &Tridiag) -> DMatrix<f64> {
        let m = t.dim();
        let mut a = DMatrix::zeros(m, m);
        for i in 0..m {
            a[(i, i)] = t.diag[i];
            if i + 1 < m {
                a[(i, i + 1)] = t.offdiag[i];
                a[(i + 1, i)] = t.offdiag[i];
            }
        }
        a
    }

    fn random_tridiag(rng: &mut ChaCha8Rng, m: usize) -> Tridiag {
        let diag = (0..m).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let off = (0..m - 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
        Tridiag::new(diag, off).unwrap()
    }

    #[test]
    fn smallest_eig_examples() {
        assert_eq!(Tridiag::new(vec![5.0], vec![]).unwrap().smallest_eig(), 5.0);
        let t = Tridiag::new(vec![2.0, 2.0], vec![1.0]).unwrap();
        assert!((t.smallest_eig() - 1.0).abs() < 1e-12);
        let t = Tridiag::new(vec![0.0; 3], vec![1.0, 1.0]).unwrap();
        let want = SymmetricEigen::new(dense(&t)).eigenvalues.min();
        assert!((want + 2f64.sqrt()).abs() < 1e-12);
        assert!((t.smallest_eig() - want).abs() < 1e-12);
    }

    #[test]
    fn bisection_matches_dense_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in 1..12 {
            let t = random_tridiag(&mut rng, m);
            let mut want: Vec<f64> = SymmetricEigen::new(dense(&t))
                .eigenvalues
                .iter()
                .copied()
                .collect();
            want.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let tol = 1e-12 * t.inf_norm().max(1.0);
            for (k, w) in want.iter().enumerate() {
                assert!((t.eigenvalue(k) - w).abs() <= tol, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn shifted_solve_examples() {
        let mut count = 0;
        let t = Tridiag::new(vec![1.0], vec![]).unwrap();
        assert_eq!(
            solve_shifted_tridiag(&t, 0.0, &[2.0], &mut count).unwrap(),
            vec![2.0]
        );
        let t = Tridiag::new(vec![1.0, 3.0], vec![0.0]).unwrap();
        assert_eq!(
            solve_shifted_tridiag(&t, 1.0, &[2.0, 8.0], &mut count).unwrap(),
            vec![1.0, 2.0]
        );
        assert_eq!(count, 2);
    }

    #[test]
    fn shifted_solve_residual_on_random_spd() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut count = 0;
        for _ in 0..20 {
            let t = random_tridiag(&mut rng, 5);
            let before = t.clone();
            let lam = -t.smallest_eig() + rng.gen_range(0.1..2.0);
            let rhs: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x = solve_shifted_tridiag(&t, lam, &rhs, &mut count).unwrap();
            let tx = t.matvec(&x);
            let res: f64 = (0..5)
                .map(|i| (tx[i] + lam * x[i] - rhs[i]).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(res <= 1e-12, "residual {res}");
            assert_eq!(t, before);
        }
    }

    #[test]
    fn indefinite_shift_is_rejected() {
        let t = Tridiag::new(vec![-1.0, 2.0], vec![0.5]).unwrap();
        let mut count = 0;
        assert!(matches!(
            solve_shifted_tridiag(&t, 0.5, &[1.0, 1.0], &mut count),
            Err(LinalgError::NotPositiveDefinite { index: 0, .. })
        ));
        assert!(solve_shifted_tridiag(&t, 0.5, &[1.0], &mut count).is_err());
    }

    #[test]
    fn leftmost_eigvec_is_eigenvector() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in 2..8 {
            let t = random_tridiag(&mut rng, m);
            let xi = t.smallest_eig();
            let u = t.leftmost_eigvec(xi);
            let tu = t.matvec(&u);
            let res: f64 = (0..m)
                .map(|i| (tu[i] - xi * u[i]).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(res < 1e-8, "m={m} res={res}");
        }
    }

    #[test]
    fn shape_is_checked() {
        assert!(Tridiag::new(vec![], vec![]).is_err());
        assert!(Tridiag::new(vec![1.0, 2.0], vec![]).is_err());
    }
}
