use super::Counters;
use crate::config::SolverConfig;
use crate::error::{check_len, Error, Result};
use crate::linalg::{secular_root_from, KrylovWorkspace};
use crate::model::{check_second_order, Problem, StepCandidate, StepSource};
use crate::vecops::norm2;

/// Minimizes `c(s; sigma) = q(s) + sigma ||s||^3 / 2` over Lanczos subspaces
/// of increasing dimension.
///
/// The subspace solution is accepted once
/// `||g + (H + sigma ||s|| I) s|| <= kappa3 ||s||^2`, or when the subspace is
/// invariant or full-dimensional. That residual is evaluated from the Lanczos
/// relation `H R = R T + beta r_{m+1} e_m'`, so the test is free; the returned
/// candidate caches `H s` from one extra Hessian-vector product.
pub fn cubic_krylov_step<P: Problem + ?Sized>(
    problem: &P,
    x: &[f64],
    g: &[f64],
    sigma: f64,
    cfg: &SolverConfig,
    counters: &mut Counters,
) -> Result<StepCandidate> {
    let n = problem.dim();
    check_len(n, x)?;
    check_len(n, g)?;
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    if norm2(g) == 0.0 {
        return Err(Error::ZeroGradient);
    }
    let kappa4 = cfg.effective_kappa4(sigma);

    let mut hvps = 0usize;
    let mut hvp = |v: &[f64]| {
        hvps += 1;
        problem.hess_vec(x, v)
    };
    let mut ws = KrylovWorkspace::new(g, &mut hvp)?;
    let gamma = ws.gamma();
    let mut hint = None;

    let sol = loop {
        let t = ws.tridiag();
        let sol = secular_root_from(&t, gamma, sigma, hint)?;
        counters.factorizations += sol.factorizations;
        hint = Some(sol.shift);

        let v = &sol.v;
        let v_norm = norm2(v);
        let m = v.len();
        let tv = t.matvec(v);
        let mut in_space: f64 = (0..m).map(|i| (tv[i] + sol.lambda * v[i]).powi(2)).sum();
        in_space += gamma * gamma + 2.0 * gamma * (tv[0] + sol.lambda * v[0]);
        let tail = ws.residual_norm() * v[m - 1];
        let residual = (in_space.max(0.0) + tail * tail).sqrt();

        let converged = residual <= cfg.kappa3 * v_norm * v_norm;
        let curvature_ok =
            !cfg.check_second_order || check_second_order(sol.xi_min, v_norm, kappa4);
        if (converged && curvature_ok) || ws.is_exhausted() {
            break sol;
        }
        ws.expand(&mut hvp)?;
    };

    let s = ws.lift(&sol.v);
    let hs = hvp(&s);
    counters.hvp += hvps;
    let lambda = sigma * norm2(&s);
    let mut cand = StepCandidate::new(g, s, hs, lambda, StepSource::Cubic)?;
    cand.subspace_dim = ws.dim();
    cand.xi_min = Some(sol.xi_min);
    cand.h_norm_est = sol.xi_min.abs().max(sol.xi_max.abs());
    Ok(cand)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{reduced_cubic_value, secular_root};
    use crate::model::check_step_conditions;
    use crate::problems::{DiagonalQuadratic, Rosenbrock};
    use crate::vecops::dot;

    #[test]
    fn one_dimensional_negative_curvature() {
        // f = x - x^2/2 near 0: g = 1, H = -1
        let p = DiagonalQuadratic::new(vec![-1.0], Some(vec![1.0]));
        let mut c = Counters::default();
        let cand =
            cubic_krylov_step(&p, &[0.0], &[1.0], 1.0, &SolverConfig::default(), &mut c).unwrap();
        let t = (1.0 + 7f64.sqrt()) / 3.0;
        assert!((cand.s[0] + t).abs() < 1e-12);
        assert!((cand.lambda - t).abs() < 1e-12);
        assert_eq!(cand.subspace_dim, 1);
        assert_eq!(c.hvp, 2);
    }

    #[test]
    fn identity_breaks_down_at_dimension_one() {
        // H = I, g = (1, 0): t + 1.5 t^2 = 1 with s = -t e1
        let p = DiagonalQuadratic::new(vec![1.0, 1.0], None);
        let mut c = Counters::default();
        let cand = cubic_krylov_step(
            &p,
            &[1.0, 0.0],
            &[1.0, 0.0],
            1.0,
            &SolverConfig::default(),
            &mut c,
        )
        .unwrap();
        let t = (7f64.sqrt() - 1.0) / 3.0;
        assert_eq!(cand.subspace_dim, 1);
        assert!((cand.s[0] + t).abs() < 1e-12 && cand.s[1] == 0.0);
        let r = check_step_conditions(
            0.5,
            &[1.0, 0.0],
            &cand,
            cand.h_norm_est,
            &SolverConfig::default(),
        )
        .unwrap();
        assert!(r.all());
    }

    #[test]
    fn lambda_matches_sigma_times_step_norm() {
        let p = Rosenbrock::new(6);
        let x = vec![-1.2, 1.0, 0.3, -0.5, 2.0, 0.1];
        let g = p.gradient(&x);
        for sigma in [1e-3, 0.5, 1.0, 7.0, 1e4] {
            let mut c = Counters::default();
            let cand =
                cubic_krylov_step(&p, &x, &g, sigma, &SolverConfig::default(), &mut c).unwrap();
            let want = sigma * cand.s_norm();
            assert!((cand.lambda - want).abs() <= 1e-10 * want);
            let fk = p.value(&x);
            let r = check_step_conditions(fk, &g, &cand, cand.h_norm_est, &SolverConfig::default())
                .unwrap();
            assert!(r.all(), "sigma={sigma}: {r:?}");
        }
    }

    #[test]
    fn cubic_value_nonincreasing_in_subspace_dimension() {
        let p = Rosenbrock::new(8);
        let x = vec![-1.2, 1.0, -0.7, 0.2, 0.4, -1.1, 1.5, 0.9];
        let g = p.gradient(&x);
        let mut ws = KrylovWorkspace::new(&g, |v: &[f64]| p.hess_vec(&x, v)).unwrap();
        let mut prev = f64::INFINITY;
        for sigma in [0.3, 3.0] {
            loop {
                let t = ws.tridiag();
                let sol = secular_root(&t, ws.gamma(), sigma).unwrap();
                let val = reduced_cubic_value(&t, ws.gamma(), sigma, &sol.v);
                assert!(
                    val <= prev + 1e-12 * prev.abs().max(1.0),
                    "m={} {val} > {prev}",
                    ws.dim()
                );
                prev = val;
                if ws.is_exhausted() {
                    break;
                }
                ws.expand(|v: &[f64]| p.hess_vec(&x, v)).unwrap();
            }
            ws = KrylovWorkspace::new(&g, |v: &[f64]| p.hess_vec(&x, v)).unwrap();
            prev = f64::INFINITY;
        }
    }

    #[test]
    fn lifted_residual_matches_lanczos_estimate_on_full_space() {
        let p = Rosenbrock::new(4);
        let x = vec![0.1, -0.3, 1.7, 2.2];
        let g = p.gradient(&x);
        let cfg = SolverConfig {
            kappa3: 1e-30,
            ..SolverConfig::default()
        };
        let mut c = Counters::default();
        let cand = cubic_krylov_step(&p, &x, &g, 2.0, &cfg, &mut c).unwrap();
        assert_eq!(cand.subspace_dim, 4);
        // exact full-space minimizer: g + (H + lambda I)s = -lambda s / 2
        let want = 0.5 * cand.lambda * cand.s_norm();
        assert!((norm2(&cand.residual) - want).abs() <= 1e-8 * want.max(1.0));
        assert!(dot(&cand.s, &cand.residual) < 0.0);
    }
}
