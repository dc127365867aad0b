use super::Counters;
use crate::config::SolverConfig;
use crate::error::{check_len, Error, Result};
use crate::linalg::Tridiag;
use crate::model::{check_second_order, check_step_conditions, Problem, StepCandidate, StepSource};
use crate::vecops::{axpy, dot, norm2};

#[derive(Debug, Clone, PartialEq)]
pub enum CgKind {
    /// The step passed every condition with `lambda = 0`.
    Certified(StepCandidate),
    /// A direction with `p'Hp <= 0` was met; CG stopped on the spot.
    NegativeCurvature,
    /// The residual vanished but the iterate was never certified.
    SolvedWithoutCertificate,
    /// `n` iterations without certification or negative curvature. The
    /// iterate is still used as the trial step.
    LimitWithoutCertificate(StepCandidate),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CgOutcome {
    pub kind: CgKind,
    /// Completed CG updates.
    pub cg_iterations: usize,
}

/// Lanczos tridiagonal implied by the CG step lengths and `beta` ratios.
/// Its extreme eigenvalues are Ritz values of `H` on the CG Krylov space.
fn cg_tridiag(alphas: &[f64], betas: &[f64]) -> Tridiag {
    let k = alphas.len();
    let mut diag = Vec::with_capacity(k);
    let mut off = Vec::with_capacity(k.saturating_sub(1));
    for j in 0..k {
        let mut d = 1.0 / alphas[j];
        if j > 0 {
            d += betas[j - 1] / alphas[j - 1];
            off.push(betas[j - 1].sqrt() / alphas[j - 1]);
        }
        diag.push(d);
    }
    Tridiag { diag, offdiag: off }
}

/// Truncated CG on `H s = -g` from `s = 0`, checking the step conditions
/// after every update.
///
/// `H s` is maintained as the same linear combination of the products
/// `H p_i` that builds `s`, so certification costs no extra oracle calls:
/// one Hessian-vector product is spent per search direction examined.
pub fn cg_newton_step<P: Problem + ?Sized>(
    problem: &P,
    x: &[f64],
    fk: f64,
    g: &[f64],
    cfg: &SolverConfig,
    counters: &mut Counters,
) -> Result<CgOutcome> {
    let n = problem.dim();
    check_len(n, x)?;
    check_len(n, g)?;
    let g_norm = norm2(g);
    if g_norm == 0.0 {
        return Err(Error::ZeroGradient);
    }
    let kappa4 = cfg.effective_kappa4(0.0);

    let mut s = vec![0.0; n];
    let mut hs = vec![0.0; n];
    let mut r = g.to_vec();
    let mut p: Vec<f64> = g.iter().map(|v| -v).collect();
    let mut rr = dot(&r, &r);
    let mut alphas = Vec::new();
    let mut betas = Vec::new();
    let mut last = None;

    for it in 0..n {
        let hp = problem.hess_vec(x, &p);
        counters.hvp += 1;
        let curv = dot(&p, &hp);
        if !(curv > 0.0) {
            return Ok(CgOutcome {
                kind: CgKind::NegativeCurvature,
                cg_iterations: it,
            });
        }
        let alpha = rr / curv;
        axpy(alpha, &p, &mut s);
        axpy(alpha, &hp, &mut hs);
        axpy(alpha, &hp, &mut r);
        alphas.push(alpha);

        let t = cg_tridiag(&alphas, &betas);
        let xi_min = t.smallest_eig();
        let mut cand = StepCandidate::new(g, s.clone(), hs.clone(), 0.0, StepSource::Cg)?;
        cand.xi_min = Some(xi_min);
        cand.h_norm_est = t.spectral_norm();
        let report = check_step_conditions(fk, g, &cand, cand.h_norm_est, cfg)?;
        let curvature_ok =
            !cfg.check_second_order || check_second_order(xi_min, cand.s_norm(), kappa4);
        if report.all() && curvature_ok {
            return Ok(CgOutcome {
                kind: CgKind::Certified(cand),
                cg_iterations: it + 1,
            });
        }

        let rr_new = dot(&r, &r);
        if rr_new.sqrt() <= cfg.cg_residual_safety * f64::EPSILON * g_norm {
            return Ok(CgOutcome {
                kind: CgKind::SolvedWithoutCertificate,
                cg_iterations: it + 1,
            });
        }
        let beta = rr_new / rr;
        betas.push(beta);
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = -ri + beta * *pi;
        }
        rr = rr_new;
        last = Some(cand);
    }

    Ok(CgOutcome {
        kind: CgKind::LimitWithoutCertificate(last.expect("n >= 1 iterations ran")),
        cg_iterations: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::DiagonalQuadratic;

    fn run(diag: Vec<f64>, g: &[f64]) -> (CgOutcome, Counters) {
        let p = DiagonalQuadratic::new(diag, None);
        let x = vec![0.0; g.len()];
        let mut c = Counters::default();
        let out = cg_newton_step(&p, &x, 0.0, g, &SolverConfig::default(), &mut c).unwrap();
        (out, c)
    }

    #[test]
    fn identity_one_iteration() {
        let (out, c) = run(vec![1.0, 1.0], &[1.0, 0.0]);
        let CgKind::Certified(cand) = out.kind else {
            panic!("{out:?}")
        };
        assert_eq!(cand.s, vec![-1.0, 0.0]);
        assert_eq!(cand.lambda, 0.0);
        assert_eq!(cand.residual, vec![0.0, 0.0]);
        assert_eq!(out.cg_iterations, 1);
        assert_eq!(c.hvp, 1);
    }

    #[test]
    fn negative_definite_stops_immediately() {
        let (out, c) = run(vec![-1.0, -1.0], &[1.0, 0.0]);
        assert_eq!(out.kind, CgKind::NegativeCurvature);
        assert_eq!(out.cg_iterations, 0);
        assert_eq!(c.hvp, 1);
    }

    #[test]
    fn diag_1_3_reaches_dense_solution() {
        // dense oracle: s = -H^{-1} g = (-1, -1/3)
        let (out, c) = run(vec![1.0, 3.0], &[1.0, 1.0]);
        let CgKind::Certified(cand) = out.kind else {
            panic!("{out:?}")
        };
        assert!(out.cg_iterations <= 2);
        assert_eq!(c.hvp, out.cg_iterations);
        if out.cg_iterations == 2 {
            assert!((cand.s[0] + 1.0).abs() < 1e-14);
            assert!((cand.s[1] + 1.0 / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn cg_tridiag_ritz_values_bracket_spectrum() {
        // three CG steps on diag(1, 2, 5) from g = ones reproduce the spectrum
        let d = [1.0, 2.0, 5.0];
        let g = [1.0, 1.0, 1.0];
        let mut r = g.to_vec();
        let mut p: Vec<f64> = g.iter().map(|v| -v).collect();
        let mut rr = dot(&r, &r);
        let (mut al, mut be) = (vec![], vec![]);
        for _ in 0..3 {
            let hp: Vec<f64> = p.iter().zip(&d).map(|(a, b)| a * b).collect();
            let a = rr / dot(&p, &hp);
            axpy(a, &hp, &mut r);
            al.push(a);
            let rn = dot(&r, &r);
            be.push(rn / rr);
            for (pi, ri) in p.iter_mut().zip(&r) {
                *pi = -ri + rn / rr * *pi;
            }
            rr = rn;
        }
        be.pop();
        let t = cg_tridiag(&al, &be);
        assert!((t.smallest_eig() - 1.0).abs() < 1e-10);
        assert!((t.largest_eig() - 5.0).abs() < 1e-10);
    }

    #[test]
    fn zero_gradient_is_rejected() {
        let p = DiagonalQuadratic::new(vec![1.0], None);
        let mut c = Counters::default();
        assert_eq!(
            cg_newton_step(&p, &[0.0], 0.0, &[0.0], &SolverConfig::default(), &mut c),
            Err(Error::ZeroGradient)
        );
    }
}
