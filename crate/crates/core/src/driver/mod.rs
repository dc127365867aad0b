//! Outer loops: the hybrid regularized Newton method and the inexact ARC
//! baseline. Both share termination, limits, counters and reporting.

mod iarc;
mod irnewton;

use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use iarc::{iarc_sigma_update, iarc_solve};
pub use irnewton::{aux_sigma_update, bounds_after_rejection, irnewton_solve};

use crate::config::SolverConfig;
use crate::error::{check_len, Result};
use crate::model::{ConditionReport, Problem, StepSource};
use crate::subproblem::Counters;
use crate::vecops::{is_finite, norm_inf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Irnewton,
    Iarc,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Irnewton => "irnewton",
            SolverKind::Iarc => "iarc",
        }
    }

    pub fn solve<P: Problem + ?Sized>(
        self,
        problem: &P,
        x0: &[f64],
        cfg: &SolverConfig,
    ) -> Result<RunReport> {
        match self {
            SolverKind::Irnewton => irnewton_solve(problem, x0, cfg),
            SolverKind::Iarc => iarc_solve(problem, x0, cfg),
        }
    }
}

impl std::str::FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "irnewton" => Ok(SolverKind::Irnewton),
            "iarc" => Ok(SolverKind::Iarc),
            other => Err(format!(
                "unknown solver `{other}` (expected irnewton or iarc)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Converged,
    MaxIters,
    TimeLimit,
    StepNormFloor,
    SubproblemFailure,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Converged => "Converged",
            Status::MaxIters => "MaxIters",
            Status::TimeLimit => "TimeLimit",
            Status::StepNormFloor => "StepNormFloor",
            Status::SubproblemFailure => "SubproblemFailure",
        }
    }
}

/// One trial step and what the loop did with it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub f: f64,
    pub grad_inf_norm: f64,
    pub f_trial: f64,
    pub s_norm: f64,
    pub lambda: f64,
    /// `(f_k - f(x_k + s_k)) / ||s_k||^3`
    pub rho: f64,
    /// Actual over predicted cubic-model decrease (iARC only).
    pub model_ratio: Option<f64>,
    pub accepted: bool,
    /// Lower ratio bound at the start of the iteration.
    pub sigma_lo: f64,
    /// Lower ratio bound the step was computed with (differs from `sigma_lo`
    /// after a failed CG attempt).
    pub sigma_lo_step: f64,
    pub sigma_hi: f64,
    /// Auxiliary sigma (iRNewton) or the regularization weight (iARC) at the
    /// start of the iteration.
    pub sigma: f64,
    pub source: StepSource,
    pub conditions: ConditionReport,
    pub second_order: Option<bool>,
    pub cg_iterations: usize,
    pub subspace_dim: usize,
    pub hvp: usize,
    pub factorizations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub solver: SolverKind,
    pub status: Status,
    pub iterations: usize,
    pub accepted: usize,
    /// Trial steps with `lambda = 0`.
    pub newton_steps: usize,
    pub hvp_count: usize,
    pub tridiag_factorizations: usize,
    pub final_x: Vec<f64>,
    pub final_f: f64,
    pub final_grad_inf_norm: f64,
    pub initial_grad_inf_norm: f64,
    pub wall_secs: f64,
    pub history: Vec<IterationRecord>,
}

/// `||g||_inf <= grad_tol * max(||g_0||_inf, 1)`
pub fn terminated(g: &[f64], g0_inf: f64, cfg: &SolverConfig) -> bool {
    norm_inf(g) <= cfg.grad_tol * g0_inf.max(1.0)
}

/// State shared by both outer loops.
struct Session<'a, P: ?Sized> {
    problem: &'a P,
    cfg: &'a SolverConfig,
    solver: SolverKind,
    start: Instant,
    x: Vec<f64>,
    f: f64,
    g: Vec<f64>,
    g0_inf: f64,
    counters: Counters,
    accepted: usize,
    newton_steps: usize,
    history: Vec<IterationRecord>,
}

impl<'a, P: Problem + ?Sized> Session<'a, P> {
    fn new(problem: &'a P, x0: &[f64], cfg: &'a SolverConfig, solver: SolverKind) -> Result<Self> {
        cfg.validate()?;
        check_len(problem.dim(), x0)?;
        let x = x0.to_vec();
        let f = problem.value(&x);
        let g = problem.gradient(&x);
        let g0_inf = norm_inf(&g);
        Ok(Self {
            problem,
            cfg,
            solver,
            start: Instant::now(),
            x,
            f,
            g,
            g0_inf,
            counters: Counters::default(),
            accepted: 0,
            newton_steps: 0,
            history: Vec::new(),
        })
    }

    /// Termination and limit tests at the top of an iteration.
    fn stop_status(&self) -> Option<Status> {
        if !self.f.is_finite() || !is_finite(&self.g) {
            return Some(Status::SubproblemFailure);
        }
        if terminated(&self.g, self.g0_inf, self.cfg) {
            return Some(Status::Converged);
        }
        if self.history.len() as u64 >= self.cfg.max_iters {
            return Some(Status::MaxIters);
        }
        if self.start.elapsed().as_secs_f64() >= self.cfg.time_limit_secs {
            return Some(Status::TimeLimit);
        }
        None
    }

    fn trial_point(&self, s: &[f64]) -> Vec<f64> {
        self.x.iter().zip(s).map(|(a, b)| a + b).collect()
    }

    /// Moves to an accepted trial point, reusing its cached value.
    fn accept(&mut self, x_trial: Vec<f64>, f_trial: f64) {
        self.x = x_trial;
        self.f = f_trial;
        self.g = self.problem.gradient(&self.x);
        self.accepted += 1;
    }

    fn finish(self, status: Status) -> RunReport {
        RunReport {
            solver: self.solver,
            status,
            iterations: self.history.len(),
            accepted: self.accepted,
            newton_steps: self.newton_steps,
            hvp_count: self.counters.hvp,
            tridiag_factorizations: self.counters.factorizations,
            final_grad_inf_norm: norm_inf(&self.g),
            final_x: self.x,
            final_f: self.f,
            initial_grad_inf_norm: self.g0_inf,
            wall_secs: self.start.elapsed().as_secs_f64(),
            history: self.history,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn termination_examples() {
        let cfg = SolverConfig::default();
        assert!(terminated(&[0.0, 0.0], 123.0, &cfg));
        assert!(terminated(&[1e-5, -1e-7], 100.0, &cfg));
        assert!(!terminated(&[1e-5], 1.0, &cfg));
        assert!(!terminated(&[1e-5], 0.01, &cfg));
    }

    #[test]
    fn solver_names_round_trip() {
        for k in [SolverKind::Irnewton, SolverKind::Iarc] {
            assert_eq!(k.name().parse::<SolverKind>().unwrap(), k);
        }
        assert!("bogus".parse::<SolverKind>().is_err());
    }
}
