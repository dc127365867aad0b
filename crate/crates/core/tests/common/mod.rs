//! Helpers shared by the integration tests: dense oracles built on
//! `nalgebra`, a dense quadratic problem, and seeded random data.

#![allow(dead_code)]

use irnewton::linalg::{KrylovWorkspace, Tridiag};
use irnewton::problems::ProblemSpec;
use irnewton::Problem;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 20_240_917;

pub fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    (&a + a.transpose()) * 0.5
}

/// `f(x) = g'x + x'Hx/2` with a dense symmetric `H`.
pub struct DenseQuadratic {
    pub h: DMatrix<f64>,
    pub g: DVector<f64>,
}

impl Problem for DenseQuadratic {
    fn dim(&self) -> usize {
        self.g.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let x = DVector::from_column_slice(x);
        self.g.dot(&x) + 0.5 * x.dot(&(&self.h * &x))
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let x = DVector::from_column_slice(x);
        (&self.g + &self.h * x).as_slice().to_vec()
    }

    fn hess_vec(&self, _x: &[f64], v: &[f64]) -> Vec<f64> {
        (&self.h * DVector::from_column_slice(v))
            .as_slice()
            .to_vec()
    }
}

pub fn dense_matvec(a: &DMatrix<f64>) -> impl FnMut(&[f64]) -> Vec<f64> + '_ {
    move |v: &[f64]| (a * DVector::from_column_slice(v)).as_slice().to_vec()
}

pub fn sorted_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(a.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Orthonormal basis of `span{g, Ag, ..., A^{m-1} g}` by Arnoldi with two
/// passes of classical Gram–Schmidt, independent of the library's Lanczos.
pub fn krylov_basis(a: &DMatrix<f64>, g: &[f64], m: usize) -> DMatrix<f64> {
    let n = g.len();
    let mut q = DMatrix::zeros(n, m);
    let mut v = DVector::from_column_slice(g);
    for j in 0..m {
        for _ in 0..2 {
            for i in 0..j {
                let c = q.column(i).dot(&v);
                v -= q.column(i) * c;
            }
        }
        let nv = v.norm();
        assert!(nv > 1e-12, "Krylov space of dimension {j} is invariant");
        q.set_column(j, &(v.clone() / nv));
        v = a * q.column(j);
    }
    q
}

/// Lanczos basis as a dense matrix, the workspace's `T`, and the residual
/// norm after expanding as far as possible.
pub fn run_lanczos(a: &DMatrix<f64>, g: &[f64]) -> (DMatrix<f64>, DMatrix<f64>, usize, f64) {
    let mut mv = dense_matvec(a);
    let mut ws = KrylovWorkspace::new(g, &mut mv).unwrap();
    while !ws.is_exhausted() {
        ws.expand(&mut mv).unwrap();
    }
    let m = ws.dim();
    let n = g.len();
    let q = DMatrix::from_fn(n, m, |i, j| ws.basis()[j][i]);
    let t = ws.tridiag();
    let tm = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            t.diag[i]
        } else if i + 1 == j {
            t.offdiag[i]
        } else if j + 1 == i {
            t.offdiag[j]
        } else {
            0.0
        }
    });
    (q, tm, m, ws.residual_norm())
}

/// Worst orthonormality and projection errors of one Lanczos run, plus the
/// worst eigenvalue mismatch against the dense solver when the run reached
/// full dimension.
pub struct LanczosCheck {
    pub orthogonality: f64,
    pub similarity: f64,
    pub relation: f64,
    pub spectrum: Option<f64>,
}

pub fn check_lanczos(a: &DMatrix<f64>, g: &[f64]) -> LanczosCheck {
    let (q, t, m, resid) = run_lanczos(a, g);
    let eye = DMatrix::<f64>::identity(m, m);
    let orthogonality = (q.transpose() * &q - eye).amax();
    let a_norm = a.amax().max(1.0);
    let similarity = (q.transpose() * a * &q - &t).amax() / a_norm;
    // A Q - Q T vanishes except for the last column, whose norm is the
    // Lanczos residual.
    let r = a * &q - &q * &t;
    let mut relation = 0.0_f64;
    for j in 0..m {
        let want = if j + 1 == m { resid } else { 0.0 };
        relation = relation.max((r.column(j).norm() - want).abs() / a_norm);
    }
    let spectrum = (m == g.len()).then(|| {
        let dense = sorted_eigenvalues(a);
        // bisection on the library's tridiagonal
        let tri = Tridiag::new(
            t.diagonal().as_slice().to_vec(),
            (0..m - 1).map(|i| t[(i, i + 1)]).collect(),
        )
        .unwrap();
        let tri: Vec<f64> = (0..m).map(|k| tri.eigenvalue(k)).collect();
        dense
            .iter()
            .zip(&tri)
            .map(|(x, y)| (x - y).abs() / a_norm)
            .fold(0.0, f64::max)
    });
    LanczosCheck {
        orthogonality,
        similarity,
        relation,
        spectrum,
    }
}

/// The standard start plus `count` points from `x0 + U[-1, 1]^n`.
pub fn sample_points(spec: &ProblemSpec, count: usize, stream: u64) -> Vec<Vec<f64>> {
    let mut rng = rng(stream);
    let mut pts = vec![spec.x0.clone()];
    for _ in 0..count {
        pts.push(
            spec.x0
                .iter()
                .map(|x| x + rng.gen_range(-1.0..=1.0))
                .collect(),
        );
    }
    pts
}

pub fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}
