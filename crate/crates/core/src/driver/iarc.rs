use super::{IterationRecord, RunReport, Session, SolverKind, Status};
use crate::config::SolverConfig;
use crate::error::Result;
use crate::model::{
    acceptance_ratio, check_second_order, check_step_conditions, cubic_model, Problem,
};
use crate::subproblem::cubic_krylov_step;
use crate::vecops::norm_inf;

/// Regularization weight update from the actual/predicted decrease ratio.
pub fn iarc_sigma_update(sigma: f64, ratio: f64, cfg: &SolverConfig) -> f64 {
    if ratio >= cfg.eta2 {
        (cfg.gamma0 * sigma).max(cfg.sigma_min)
    } else if ratio >= cfg.eta1 {
        sigma
    } else {
        cfg.gamma_l * sigma
    }
}

/// Inexact adaptive cubic regularization: every step minimizes
/// `c(s; sigma)` over Krylov subspaces and is accepted when the decrease
/// ratio against the cubic model reaches `eta1`.
pub fn iarc_solve<P: Problem + ?Sized>(
    problem: &P,
    x0: &[f64],
    cfg: &SolverConfig,
) -> Result<RunReport> {
    let mut run = Session::new(problem, x0, cfg, SolverKind::Iarc)?;
    let mut sigma = cfg.sigma0;

    let status = loop {
        if let Some(status) = run.stop_status() {
            break status;
        }
        let before = run.counters;
        let cand = match cubic_krylov_step(problem, &run.x, &run.g, sigma, cfg, &mut run.counters) {
            Ok(c) => c,
            Err(_) => break Status::SubproblemFailure,
        };
        let s_norm = cand.s_norm();
        let conditions = check_step_conditions(run.f, &run.g, &cand, cand.h_norm_est, cfg)?;
        if conditions.degenerate {
            break Status::SubproblemFailure;
        }
        if s_norm < cfg.step_norm_floor {
            break Status::StepNormFloor;
        }
        let predicted = run.f - cubic_model(run.f, &run.g, &cand.s, &cand.hs, sigma)?;
        if !(predicted > 0.0) {
            break Status::SubproblemFailure;
        }

        let x_trial = run.trial_point(&cand.s);
        let f_trial = problem.value(&x_trial);
        if f_trial.is_nan() {
            break Status::SubproblemFailure;
        }
        let ratio = (run.f - f_trial) / predicted;
        let rho = acceptance_ratio(run.f, f_trial, s_norm)?;
        let accepted = ratio >= cfg.eta1;

        run.history.push(IterationRecord {
            f: run.f,
            grad_inf_norm: norm_inf(&run.g),
            f_trial,
            s_norm,
            lambda: cand.lambda,
            rho,
            model_ratio: Some(ratio),
            accepted,
            sigma_lo: sigma,
            sigma_lo_step: sigma,
            sigma_hi: sigma,
            sigma,
            source: cand.source,
            conditions,
            second_order: cand
                .xi_min
                .map(|xi| check_second_order(xi, s_norm, cfg.effective_kappa4(sigma))),
            cg_iterations: 0,
            subspace_dim: cand.subspace_dim,
            hvp: run.counters.hvp - before.hvp,
            factorizations: run.counters.factorizations - before.factorizations,
        });

        if accepted {
            run.accept(x_trial, f_trial);
        }
        sigma = iarc_sigma_update(sigma, ratio, cfg);
    };
    Ok(run.finish(status))
}
