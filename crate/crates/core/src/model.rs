//! Objective oracles, local models and the step-acceptability conditions.
//!
//! Trial pairs `(s, lambda)` are judged against three conditions, all
//! evaluated from quantities cached on the [`StepCandidate`] so that no
//! Hessian-vector products are spent on certification:
//!
//! * sufficient model decrease, a Cauchy-like lower bound on `f_k - q_k(s)`;
//! * subspace optimality, an upper bound on `s'(g + (H + lambda I)s)`;
//! * a residual bound `||g + (H + lambda I)s|| <= lambda ||s|| + kappa3 ||s||^2`.

use serde::{Deserialize, Serialize};

use crate::config::SolverConfig;
use crate::error::{check_len, Error, Result};
use crate::vecops::{dot, norm2};

/// A smooth objective of fixed dimension, available only through products.
pub trait Problem: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    fn gradient(&self, x: &[f64]) -> Vec<f64>;

    /// Hessian at `x` applied to `v`.
    fn hess_vec(&self, x: &[f64], v: &[f64]) -> Vec<f64>;
}

impl<P: Problem + ?Sized> Problem for Box<P> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (**self).gradient(x)
    }
    fn hess_vec(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        (**self).hess_vec(x, v)
    }
}

/// Where a trial step came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepSource {
    /// Truncated CG on `H s = -g` (lambda = 0).
    Cg,
    /// Cubic model minimized over a Krylov subspace.
    Cubic,
}

/// A trial pair `(s, lambda)` with the model quantities the conditions need.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCandidate {
    pub s: Vec<f64>,
    pub lambda: f64,
    /// `H_k s`
    pub hs: Vec<f64>,
    /// `f_k - q_k(s)`
    pub model_decrease: f64,
    /// `g + (H + lambda I) s`
    pub residual: Vec<f64>,
    /// Krylov dimension of a cubic solve; 0 for CG steps.
    pub subspace_dim: usize,
    /// Leftmost eigenvalue of the reduced Hessian, when known.
    pub xi_min: Option<f64>,
    /// Lower estimate of `||H_k||` from the reduced tridiagonal.
    pub h_norm_est: f64,
    pub source: StepSource,
}

impl StepCandidate {
    /// Assembles a candidate and fills in the cached model quantities.
    pub fn new(
        g: &[f64],
        s: Vec<f64>,
        hs: Vec<f64>,
        lambda: f64,
        source: StepSource,
    ) -> Result<Self> {
        check_len(g.len(), &s)?;
        check_len(g.len(), &hs)?;
        let model_decrease = -(dot(g, &s) + 0.5 * dot(&s, &hs));
        let residual = g
            .iter()
            .zip(&hs)
            .zip(&s)
            .map(|((gi, hi), si)| gi + hi + lambda * si)
            .collect();
        Ok(Self {
            s,
            lambda,
            hs,
            model_decrease,
            residual,
            subspace_dim: 0,
            xi_min: None,
            h_norm_est: 0.0,
            source,
        })
    }

    pub fn s_norm(&self) -> f64 {
        norm2(&self.s)
    }
}

/// Bounds on the ratio `lambda / ||s||` for the current iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub sigma_lo: f64,
    pub sigma_hi: f64,
}

impl Bounds {
    pub fn new(sigma_lo: f64, sigma_hi: f64) -> Result<Self> {
        if !(sigma_lo >= 0.0 && sigma_hi > 0.0 && sigma_lo <= sigma_hi) {
            return Err(Error::InvalidArgument(format!(
                "need 0 <= sigma_lo <= sigma_hi with sigma_hi > 0, got [{sigma_lo}, {sigma_hi}]"
            )));
        }
        Ok(Self { sigma_lo, sigma_hi })
    }

    /// Whether `lambda / ||s||` lies in `[sigma_lo, sigma_hi]` up to `tol`.
    pub fn contains_ratio(&self, ratio: f64, tol: f64) -> bool {
        ratio >= self.sigma_lo - tol && ratio <= self.sigma_hi + tol
    }
}

/// Outcome of [`check_step_conditions`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// Sufficient model decrease.
    pub decrease: bool,
    /// Subspace optimality.
    pub optimality: bool,
    /// Residual bound.
    pub residual: bool,
    /// `s = 0`; such candidates are never acceptable.
    pub degenerate: bool,
}

impl ConditionReport {
    pub fn all(&self) -> bool {
        !self.degenerate && self.decrease && self.optimality && self.residual
    }

    fn degenerate() -> Self {
        Self {
            decrease: false,
            optimality: false,
            residual: false,
            degenerate: true,
        }
    }
}

/// `q(s) = f_k + g's + s'Hs / 2` with `hs = H s` supplied by the caller.
pub fn quadratic_model(fk: f64, g: &[f64], s: &[f64], hs: &[f64]) -> Result<f64> {
    check_len(g.len(), s)?;
    check_len(g.len(), hs)?;
    Ok(fk + dot(g, s) + 0.5 * dot(s, hs))
}

/// `c(s; sigma) = q(s) + sigma ||s||^3 / 2`.
pub fn cubic_model(fk: f64, g: &[f64], s: &[f64], hs: &[f64], sigma: f64) -> Result<f64> {
    if sigma < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "sigma must be nonnegative, got {sigma}"
        )));
    }
    let q = quadratic_model(fk, g, s, hs)?;
    Ok(q + 0.5 * sigma * norm2(s).powi(3))
}

/// Actual decrease scaled by the cube of the step norm.
pub fn acceptance_ratio(fk: f64, f_trial: f64, s_norm: f64) -> Result<f64> {
    if s_norm <= 0.0 {
        return Err(Error::DegenerateStep);
    }
    Ok((fk - f_trial) / s_norm.powi(3))
}

/// Radius-like quantity in the sufficient-decrease condition: `||s||` for a
/// pure Newton step, `sqrt(||g|| ||s|| / lambda) / sqrt(6)` otherwise.
pub fn delta_k(g_norm: f64, s_norm: f64, lambda: f64) -> Result<f64> {
    if s_norm <= 0.0 {
        return Err(Error::DegenerateStep);
    }
    if g_norm < 0.0 || lambda < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "need g_norm >= 0 and lambda >= 0, got {g_norm} and {lambda}"
        )));
    }
    if lambda == 0.0 {
        Ok(s_norm)
    } else {
        Ok((g_norm * s_norm / lambda).sqrt() / 6f64.sqrt())
    }
}

/// Evaluates the three acceptability conditions for a candidate.
///
/// `h_norm_est` stands in for `||H_k||` in the decrease bound. It appears as
/// `1 + h_norm_est` in a denominator, so an underestimate only makes the
/// check stricter.
pub fn check_step_conditions(
    fk: f64,
    g: &[f64],
    cand: &StepCandidate,
    h_norm_est: f64,
    cfg: &SolverConfig,
) -> Result<ConditionReport> {
    let n = g.len();
    check_len(n, &cand.s)?;
    check_len(n, &cand.hs)?;
    check_len(n, &cand.residual)?;

    let s_norm = cand.s_norm();
    if s_norm == 0.0 {
        return Ok(ConditionReport::degenerate());
    }
    let g_norm = norm2(g);
    let lambda = cand.lambda;

    let decrease_needed = g_norm / (6.0 * 2f64.sqrt())
        * (g_norm / (1.0 + h_norm_est)).min(delta_k(g_norm, s_norm, lambda)?);
    let model_decrease = fk - quadratic_model(fk, g, &cand.s, &cand.hs)?;
    let decrease = model_decrease >= decrease_needed;

    let s_sq = s_norm * s_norm;
    let s_cube = s_sq * s_norm;
    let s_res = dot(&cand.s, &cand.residual);
    let curvature = dot(&cand.s, &cand.hs) + lambda * s_sq;
    let optimality = s_res <= (cfg.kappa1 * s_sq).min(0.5 * curvature + 0.5 * cfg.kappa2 * s_cube);

    let residual = norm2(&cand.residual) <= lambda * s_norm + cfg.kappa3 * s_sq;

    Ok(ConditionReport {
        decrease,
        optimality,
        residual,
        degenerate: false,
    })
}

/// Subspace curvature test `xi_min >= -kappa4 ||s||`.
pub fn check_second_order(xi_min: f64, s_norm: f64, kappa4: f64) -> bool {
    xi_min >= -kappa4 * s_norm
}
