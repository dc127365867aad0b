//! Solver parameters.
//!
//! Both solvers share one set of defaults. The limits (iterations, wall
//! clock, minimum step norm) are generous enough that the termination
//! tolerance decides every run in the built-in suite.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every tunable of the two outer loops and their subproblem solvers.
///
/// Serialized field names are the external configuration-file keys; unknown
/// keys are rejected when deserializing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Acceptance threshold on `rho = (f_k - f(x_k + s_k)) / ||s_k||^3` used by
    /// the regularized Newton loop.
    pub eta: f64,
    /// Successful-step threshold of the cubic regularization update.
    pub eta1: f64,
    /// Very-successful-step threshold of the cubic regularization update.
    pub eta2: f64,
    /// Shrink factor for sigma after very successful steps.
    pub gamma0: f64,
    /// Growth factor for the lower ratio bound (and for sigma on failure).
    #[serde(rename = "gammaL")]
    pub gamma_l: f64,
    /// Growth factor for the upper ratio bound.
    #[serde(rename = "gammaU")]
    pub gamma_u: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    /// Curvature tolerance of the optional second-order check. `None` selects
    /// `1.5 * sigma_lo` when the lower bound is positive and `1.5` otherwise.
    pub kappa4: Option<f64>,
    /// Relative tolerance on `||g||_inf`.
    pub grad_tol: f64,
    pub max_iters: u64,
    pub time_limit_secs: f64,
    pub step_norm_floor: f64,
    /// Initial value of the auxiliary sigma sequence (and of sigma for iARC).
    pub sigma0: f64,
    /// Initial upper ratio bound.
    #[serde(rename = "sigmaU0")]
    pub sigma_u0: f64,
    /// When set, trial steps must also satisfy the subspace curvature condition.
    pub check_second_order: bool,
    /// CG stops as solved once `||r|| <= cg_residual_safety * eps * ||g||`.
    pub cg_residual_safety: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            eta: 1e-16,
            eta1: 1e-16,
            eta2: 1e-1,
            gamma0: 2e-1,
            gamma_l: 1e1,
            gamma_u: 2e2,
            sigma_min: 1e-10,
            sigma_max: 1e20,
            kappa1: 1.0,
            kappa2: 1.0,
            kappa3: 1.0,
            kappa4: None,
            grad_tol: 1e-6,
            max_iters: 1_000_000,
            time_limit_secs: 14_400.0,
            step_norm_floor: 1e-20,
            sigma0: 1.0,
            sigma_u0: 1e20,
            check_second_order: false,
            cg_residual_safety: 0.5,
        }
    }
}

impl SolverConfig {
    /// Checks every ordering constraint between the parameters.
    pub fn validate(&self) -> Result<()> {
        fn bad(msg: String) -> Result<()> {
            Err(Error::InvalidConfig(msg))
        }
        let open_unit = |name: &str, v: f64| -> Result<()> {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                bad(format!("{name} must lie in (0, 1), got {v}"))
            }
        };
        let positive = |name: &str, v: f64| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                bad(format!("{name} must be positive and finite, got {v}"))
            }
        };

        open_unit("eta", self.eta)?;
        open_unit("eta1", self.eta1)?;
        open_unit("eta2", self.eta2)?;
        if self.eta1 > self.eta2 {
            return bad(format!(
                "eta1 ({}) must not exceed eta2 ({})",
                self.eta1, self.eta2
            ));
        }
        open_unit("gamma0", self.gamma0)?;
        if !(self.gamma_l > 1.0 && self.gamma_l <= self.gamma_u && self.gamma_u.is_finite()) {
            return bad(format!(
                "need 1 < gammaL <= gammaU, got gammaL={} gammaU={}",
                self.gamma_l, self.gamma_u
            ));
        }
        positive("sigma_min", self.sigma_min)?;
        positive("sigma_max", self.sigma_max)?;
        if self.sigma_min > self.sigma_max {
            return bad(format!(
                "sigma_min ({}) must not exceed sigma_max ({})",
                self.sigma_min, self.sigma_max
            ));
        }
        positive("kappa1", self.kappa1)?;
        positive("kappa2", self.kappa2)?;
        positive("kappa3", self.kappa3)?;
        if let Some(k4) = self.kappa4 {
            positive("kappa4", k4)?;
        }
        positive("grad_tol", self.grad_tol)?;
        if self.max_iters == 0 {
            return bad("max_iters must be positive".into());
        }
        positive("time_limit_secs", self.time_limit_secs)?;
        positive("step_norm_floor", self.step_norm_floor)?;
        positive("sigma0", self.sigma0)?;
        if self.sigma0 < self.sigma_min || self.sigma0 > self.sigma_max {
            return bad(format!(
                "sigma0 ({}) must lie in [sigma_min, sigma_max]",
                self.sigma0
            ));
        }
        if self.sigma_u0 < self.sigma_min || self.sigma_u0 > self.sigma_max {
            return bad(format!(
                "sigmaU0 ({}) must lie in [sigma_min, sigma_max]",
                self.sigma_u0
            ));
        }
        open_unit("cg_residual_safety", self.cg_residual_safety)?;
        Ok(())
    }

    /// The `kappa4` in effect for a given lower ratio bound.
    pub fn effective_kappa4(&self, sigma_lo: f64) -> f64 {
        self.kappa4
            .unwrap_or(1.5 * if sigma_lo > 0.0 { sigma_lo } else { 1.0 })
    }
}
