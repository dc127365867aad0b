use super::{IterationRecord, RunReport, Session, SolverKind, Status};
use crate::config::SolverConfig;
use crate::error::Result;
use crate::model::{acceptance_ratio, check_second_order, check_step_conditions, Bounds, Problem};
use crate::subproblem::{cg_newton_step, cubic_krylov_step, CgKind, Counters};

/// Auxiliary sigma update: shrink after an accepted cubic step, grow after a
/// rejected one, hold while the lower bound is zero. Stays in
/// `[sigma_min, sigma_max]`.
pub fn aux_sigma_update(sigma: f64, sigma_lo: f64, accepted: bool, cfg: &SolverConfig) -> f64 {
    if sigma_lo > 0.0 {
        if accepted {
            (cfg.gamma0 * sigma).max(cfg.sigma_min)
        } else {
            (cfg.gamma_l * sigma).min(cfg.sigma_max)
        }
    } else {
        sigma
    }
}

/// Ratio bounds for the next iteration after a rejected step.
///
/// A step whose `lambda / ||s||` fell below `sigma_min` restarts the lower
/// bound at the (clamped) auxiliary sigma; otherwise both bounds are pushed
/// up geometrically from `lambda / ||s||`.
pub fn bounds_after_rejection(
    lambda: f64,
    s_norm: f64,
    sigma_aux_next: f64,
    sigma_hi: f64,
    cfg: &SolverConfig,
) -> Bounds {
    if lambda < cfg.sigma_min * s_norm {
        let lo = sigma_aux_next.clamp(cfg.sigma_min, cfg.sigma_max);
        Bounds {
            sigma_lo: lo,
            sigma_hi: lo.max(sigma_hi.min(cfg.sigma_max)),
        }
    } else {
        let ratio = lambda / s_norm;
        Bounds {
            sigma_lo: cfg.gamma_l * ratio,
            sigma_hi: cfg.gamma_u * ratio,
        }
    }
}

/// Hybrid inexact regularized Newton method.
///
/// While the lower ratio bound is zero the step comes from truncated CG with
/// `lambda = 0`. If CG meets negative curvature or stops without a
/// certified step, the lower bound is reset to the auxiliary sigma and, in
/// the same iteration, the cubic model with that weight is minimized over
/// Krylov subspaces (`lambda = sigma_lo ||s||`). Steps are accepted when
/// `rho >= eta`.
pub fn irnewton_solve<P: Problem + ?Sized>(
    problem: &P,
    x0: &[f64],
    cfg: &SolverConfig,
) -> Result<RunReport> {
    let mut run = Session::new(problem, x0, cfg, SolverKind::Irnewton)?;
    let mut sigma_lo = 0.0_f64;
    let mut sigma_hi = cfg.sigma_u0;
    let mut sigma_aux = cfg.sigma0;

    let status = loop {
        if let Some(status) = run.stop_status() {
            break status;
        }
        let before = run.counters;
        let sigma_lo_start = sigma_lo;

        let mut cg_iterations = 0;
        let mut cand = None;
        if sigma_lo == 0.0 {
            match cg_newton_step(problem, &run.x, run.f, &run.g, cfg, &mut run.counters) {
                Ok(out) => {
                    cg_iterations = out.cg_iterations;
                    match out.kind {
                        CgKind::Certified(c) | CgKind::LimitWithoutCertificate(c) => cand = Some(c),
                        CgKind::NegativeCurvature | CgKind::SolvedWithoutCertificate => {
                            sigma_lo = sigma_aux.min(sigma_hi);
                        }
                    }
                }
                Err(_) => break Status::SubproblemFailure,
            }
        }
        let cand = match cand {
            Some(c) => c,
            None => {
                match cubic_krylov_step(problem, &run.x, &run.g, sigma_lo, cfg, &mut run.counters) {
                    Ok(c) => c,
                    Err(_) => break Status::SubproblemFailure,
                }
            }
        };

        let s_norm = cand.s_norm();
        let conditions = check_step_conditions(run.f, &run.g, &cand, cand.h_norm_est, cfg)?;
        if conditions.degenerate {
            break Status::SubproblemFailure;
        }
        if s_norm < cfg.step_norm_floor {
            break Status::StepNormFloor;
        }
        let second_order = cand
            .xi_min
            .map(|xi| check_second_order(xi, s_norm, cfg.effective_kappa4(sigma_lo)));

        let x_trial = run.trial_point(&cand.s);
        let f_trial = problem.value(&x_trial);
        if f_trial.is_nan() {
            break Status::SubproblemFailure;
        }
        let rho = acceptance_ratio(run.f, f_trial, s_norm)?;
        let accepted = rho >= cfg.eta;
        if cand.lambda == 0.0 {
            run.newton_steps += 1;
        }

        let spent = Counters {
            hvp: run.counters.hvp - before.hvp,
            factorizations: run.counters.factorizations - before.factorizations,
        };
        run.history.push(IterationRecord {
            f: run.f,
            grad_inf_norm: crate::vecops::norm_inf(&run.g),
            f_trial,
            s_norm,
            lambda: cand.lambda,
            rho,
            model_ratio: None,
            accepted,
            sigma_lo: sigma_lo_start,
            sigma_lo_step: sigma_lo,
            sigma_hi,
            sigma: sigma_aux,
            source: cand.source,
            conditions,
            second_order,
            cg_iterations,
            subspace_dim: cand.subspace_dim,
            hvp: spent.hvp,
            factorizations: spent.factorizations,
        });

        let sigma_aux_next = aux_sigma_update(sigma_aux, sigma_lo, accepted, cfg);
        if accepted {
            run.accept(x_trial, f_trial);
            sigma_lo = 0.0;
        } else {
            let next = bounds_after_rejection(cand.lambda, s_norm, sigma_aux_next, sigma_hi, cfg);
            sigma_lo = next.sigma_lo;
            sigma_hi = next.sigma_hi;
        }
        sigma_aux = sigma_aux_next;
    };
    Ok(run.finish(status))
}
