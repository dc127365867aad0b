mod common;

use common::{rng, sample_points, uniform_vec, unit};
use irnewton::problems::{fd_check_gradient, fd_check_hvp, registry};
use irnewton::vecops::dot;

#[test]
fn gradients_match_central_differences() {
    for (i, spec) in registry().iter().enumerate() {
        let p = spec.build();
        for x in sample_points(spec, 10, i as u64) {
            let err = fd_check_gradient(&p, &x, 1e-5).unwrap();
            assert!(
                err <= 1e-5,
                "{}: gradient error {err:e} at {x:?}",
                spec.name
            );
        }
    }
}

#[test]
fn hessian_products_match_central_differences() {
    for (i, spec) in registry().iter().enumerate() {
        let p = spec.build();
        let mut dirs = rng(100 + i as u64);
        for x in sample_points(spec, 10, i as u64) {
            let v = unit(uniform_vec(&mut dirs, spec.dim, -1.0, 1.0));
            let err = fd_check_hvp(&p, &x, &v, 1e-5).unwrap();
            assert!(err <= 1e-4, "{}: hvp error {err:e}", spec.name);
        }
    }
}

#[test]
fn hessian_products_are_symmetric_and_linear() {
    for (i, spec) in registry().iter().enumerate() {
        let p = spec.build();
        let mut r = rng(200 + i as u64);
        for x in sample_points(spec, 10, i as u64) {
            let u = uniform_vec(&mut r, spec.dim, -1.0, 1.0);
            let v = uniform_vec(&mut r, spec.dim, -1.0, 1.0);
            let hu = p.hess_vec(&x, &u);
            let hv = p.hess_vec(&x, &v);
            let (a, b) = (dot(&u, &hv), dot(&v, &hu));
            assert!(
                (a - b).abs() <= 1e-10 * a.abs().max(1.0),
                "{}: {a} vs {b}",
                spec.name
            );

            let w: Vec<f64> = u
                .iter()
                .zip(&v)
                .map(|(ui, vi)| 2.0 * ui - 3.0 * vi)
                .collect();
            let hw = p.hess_vec(&x, &w);
            for k in 0..spec.dim {
                let want = 2.0 * hu[k] - 3.0 * hv[k];
                assert!(
                    (hw[k] - want).abs() <= 1e-10 * want.abs().max(1.0),
                    "{}",
                    spec.name
                );
            }
        }
    }
}

#[test]
fn known_minima_are_consistent() {
    for spec in registry() {
        let p = spec.build();
        if let Some(fmin) = spec.known_f_min {
            assert!(p.value(&spec.x0) >= fmin, "{}", spec.name);
        }
        assert!(p.value(&spec.x0).is_finite());
    }
}
