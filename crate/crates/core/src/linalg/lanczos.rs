use super::{LinalgError, Tridiag};
use crate::vecops::{axpy, dot, norm2};

/// Relative size of the Lanczos residual below which the subspace is taken
/// to be invariant.
const BREAKDOWN_TOL: f64 = 1e-12;

/// Lanczos basis `R` for the Krylov space of `H` started at `g`, together
/// with the tridiagonal `T = R'HR`.
///
/// The first basis vector is `g / ||g||`, so the reduced gradient is always
/// `gamma * e1`. Each new vector is fully reorthogonalized (twice) against
/// the stored basis.
#[derive(Debug, Clone)]
pub struct KrylovWorkspace {
    basis: Vec<Vec<f64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    /// Unnormalized next Lanczos vector `H r_m - alpha_m r_m - beta_{m-1} r_{m-1}`.
    pending: Vec<f64>,
    pending_norm: f64,
    gamma: f64,
    /// Largest `||H r_i||` seen; sets the breakdown scale.
    scale: f64,
    breakdown: bool,
}

impl KrylovWorkspace {
    /// Starts the process at `g`; consumes one Hessian-vector product.
    pub fn new<F>(g: &[f64], mut hvp: F) -> Result<Self, LinalgError>
    where
        F: FnMut(&[f64]) -> Vec<f64>,
    {
        let gamma = norm2(g);
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(LinalgError::ZeroStart);
        }
        let r1: Vec<f64> = g.iter().map(|x| x / gamma).collect();
        let mut ws = Self {
            basis: Vec::new(),
            alpha: Vec::new(),
            beta: Vec::new(),
            pending: Vec::new(),
            pending_norm: 0.0,
            gamma,
            scale: 0.0,
            breakdown: false,
        };
        ws.push(r1, &mut hvp);
        Ok(ws)
    }

    /// Adds the next basis vector (one Hessian-vector product). If the
    /// pending residual is negligible the subspace is invariant: the
    /// breakdown flag is set and the dimension is left unchanged.
    pub fn expand<F>(&mut self, mut hvp: F) -> Result<(), LinalgError>
    where
        F: FnMut(&[f64]) -> Vec<f64>,
    {
        if self.breakdown {
            return Err(LinalgError::Breakdown);
        }
        let n = self.basis[0].len();
        if self.dim() >= n {
            return Err(LinalgError::FullDimension(n));
        }
        if self.is_invariant() {
            self.breakdown = true;
            return Ok(());
        }
        let beta = self.pending_norm;
        let next: Vec<f64> = self.pending.iter().map(|x| x / beta).collect();
        self.beta.push(beta);
        self.push(next, &mut hvp);
        Ok(())
    }

    fn push<F>(&mut self, r: Vec<f64>, hvp: &mut F)
    where
        F: FnMut(&[f64]) -> Vec<f64>,
    {
        let mut w = hvp(&r);
        self.scale = self.scale.max(norm2(&w));
        let a = dot(&r, &w);
        axpy(-a, &r, &mut w);
        if let (Some(prev), Some(&b)) = (self.basis.last(), self.beta.last()) {
            axpy(-b, prev, &mut w);
        }
        self.alpha.push(a);
        self.basis.push(r);
        for _ in 0..2 {
            for q in &self.basis {
                let c = dot(q, &w);
                axpy(-c, q, &mut w);
            }
        }
        self.pending_norm = norm2(&w);
        self.pending = w;
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis[0].len()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn breakdown(&self) -> bool {
        self.breakdown
    }

    /// Norm of the coupling to the next (not yet added) basis vector.
    pub fn residual_norm(&self) -> f64 {
        self.pending_norm
    }

    /// Whether the current span is (numerically) invariant under `H`.
    pub fn is_invariant(&self) -> bool {
        self.pending_norm <= BREAKDOWN_TOL * self.scale.max(f64::MIN_POSITIVE)
    }

    /// Whether the subspace cannot grow any further.
    pub fn is_exhausted(&self) -> bool {
        self.breakdown || self.is_invariant() || self.dim() >= self.ambient_dim()
    }

    pub fn tridiag(&self) -> Tridiag {
        Tridiag {
            diag: self.alpha.clone(),
            offdiag: self.beta.clone(),
        }
    }

    /// `R v`
    pub fn lift(&self, v: &[f64]) -> Vec<f64> {
        let mut s = vec![0.0; self.ambient_dim()];
        for (q, vi) in self.basis.iter().zip(v) {
            axpy(*vi, q, &mut s);
        }
        s
    }
}
