//! Global minimizer of the reduced cubic
//!
//! ```text
//! m(v) = gamma e1'v + v'Tv / 2 + sigma ||v||^3 / 2
//! ```
//!
//! Stationarity reads `(T + mu I) v = -gamma e1` with `mu = 1.5 sigma ||v||`
//! and `T + mu I` positive semidefinite, so the work is a scalar root-find in
//! `mu` on `(max(0, -xi_min), inf)`. The regularization value reported with
//! the step is `lambda = sigma ||v||`.

use super::{LinalgError, Tridiag};
use crate::vecops::{dot, norm2};

const MAX_ITERS: usize = 300;

/// Minimizer of the reduced cubic over one Krylov subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSolution {
    pub v: Vec<f64>,
    /// `sigma ||v||`
    pub lambda: f64,
    /// `1.5 sigma ||v||`, the shift making `(T + shift I) v = -gamma e1`.
    pub shift: f64,
    pub xi_min: f64,
    pub xi_max: f64,
    /// Shifted `LDL'` factorizations performed.
    pub factorizations: usize,
    /// Solved by an eigenvector correction at `shift = -xi_min`.
    pub hard_case: bool,
}

/// `gamma e1'v + v'Tv/2 + sigma ||v||^3/2`
pub fn reduced_cubic_value(t: &Tridiag, gamma: f64, sigma: f64, v: &[f64]) -> f64 {
    gamma * v[0] + 0.5 * dot(v, &t.matvec(v)) + 0.5 * sigma * norm2(v).powi(3)
}

/// Positive root of `x^2 + b x - c = 0` for `c > 0`, without cancellation.
fn positive_root(b: f64, c: f64) -> f64 {
    let disc = (b * b + 4.0 * c).sqrt();
    if b >= 0.0 {
        2.0 * c / (b + disc)
    } else {
        0.5 * (disc - b)
    }
}

struct Eval {
    mu: f64,
    v: Vec<f64>,
    v_norm: f64,
    /// `v' (T + mu I)^{-1} v`, i.e. `-||v|| d||v||/dmu`.
    vw: f64,
}

fn evaluate(t: &Tridiag, gamma: f64, mu: f64, count: &mut usize) -> Option<Eval> {
    *count += 1;
    let ldl = t.factor_shifted(mu).ok()?;
    let mut rhs = vec![0.0; t.dim()];
    rhs[0] = -gamma;
    let v = ldl.solve(&rhs);
    let w = ldl.solve(&v);
    let v_norm = norm2(&v);
    if !v_norm.is_finite() {
        return None;
    }
    Some(Eval {
        mu,
        vw: dot(&v, &w),
        v,
        v_norm,
    })
}

/// Minimizes the reduced cubic; see [`secular_root_from`].
pub fn secular_root(t: &Tridiag, gamma: f64, sigma: f64) -> Result<CubicSolution, LinalgError> {
    secular_root_from(t, gamma, sigma, None)
}

/// Minimizes the reduced cubic, optionally starting the shift iteration at
/// `shift_hint` (for instance the shift from the previous, smaller subspace).
///
/// The iteration is Newton's method on `1/||v(mu)|| - 1.5 sigma / mu`,
/// safeguarded by bisection on a bracket built from the extreme eigenvalues
/// of `T`. When the root would sit at or left of `-xi_min` (the hard case)
/// the solution is completed with a leftmost eigenvector.
pub fn secular_root_from(
    t: &Tridiag,
    gamma: f64,
    sigma: f64,
    shift_hint: Option<f64>,
) -> Result<CubicSolution, LinalgError> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(LinalgError::InvalidArgument(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(LinalgError::InvalidArgument(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    let sp = 1.5 * sigma;
    let xi_min = t.smallest_eig();
    let xi_max = t.largest_eig();
    let floor = (-xi_min).max(0.0);
    let mut count = 0;

    // At the root ||v|| lies between gamma/(mu + xi_max) and gamma/(mu + xi_min).
    let mut lo = floor.max(positive_root(xi_max, sp * gamma));
    let mut hi = positive_root(xi_min, sp * gamma).max(lo);
    hi += 4.0 * f64::EPSILON * hi.max(f64::MIN_POSITIVE);

    if xi_min <= 0.0 {
        let probe = floor + 1e-12 * floor.max(1.0);
        if probe >= lo {
            match evaluate(t, gamma, probe, &mut count) {
                Some(e) if sp * e.v_norm <= e.mu => {
                    return Ok(hard_case(t, gamma, sigma, floor, xi_min, xi_max, count));
                }
                Some(e) => lo = lo.max(e.mu),
                None => {}
            }
        }
    }

    // Make sure the upper end really is right of the root.
    for _ in 0..64 {
        match evaluate(t, gamma, hi, &mut count) {
            Some(e) if sp * e.v_norm > e.mu => {
                lo = hi;
                hi *= 2.0;
            }
            Some(_) => break,
            None => {
                lo = hi;
                hi = 2.0 * hi + 1.0;
            }
        }
    }

    let mut mu = match shift_hint {
        Some(h) if h > lo && h < hi => h,
        _ if lo > floor => lo,
        _ => 0.5 * (lo + hi),
    };
    let mut best: Option<Eval> = None;
    for _ in 0..MAX_ITERS {
        let Some(e) = evaluate(t, gamma, mu, &mut count) else {
            lo = mu;
            mu = 0.5 * (lo + hi);
            continue;
        };
        let phi = sp * e.v_norm - e.mu;
        let done = phi.abs() <= 2.0 * f64::EPSILON * e.mu;
        if phi > 0.0 {
            lo = e.mu;
        } else {
            hi = e.mu;
        }
        let psi = 1.0 / e.v_norm - sp / e.mu;
        let dpsi = e.vw / e.v_norm.powi(3) + sp / (e.mu * e.mu);
        let newton = e.mu - psi / dpsi;
        best = Some(e);
        if done {
            break;
        }
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next <= lo || next >= hi || hi - lo <= 2.0 * f64::EPSILON * hi {
            break;
        }
        mu = next;
    }

    let e = match best {
        Some(e) => e,
        None => evaluate(t, gamma, hi, &mut count).ok_or(LinalgError::NotPositiveDefinite {
            index: 0,
            pivot: f64::NAN,
        })?,
    };
    Ok(CubicSolution {
        lambda: sigma * e.v_norm,
        shift: sp * e.v_norm,
        v: e.v,
        xi_min,
        xi_max,
        factorizations: count,
        hard_case: false,
    })
}

fn hard_case(
    t: &Tridiag,
    gamma: f64,
    sigma: f64,
    mu: f64,
    xi_min: f64,
    xi_max: f64,
    mut count: usize,
) -> CubicSolution {
    let m = t.dim();
    let sp = 1.5 * sigma;
    let u = t.leftmost_eigvec(xi_min);

    // Minimum-norm solution of (T + mu I) v = -gamma e1 on the complement of u,
    // by iterative refinement with a slightly larger positive definite shift.
    let mut rhs = vec![0.0; m];
    rhs[0] = -gamma;
    let c = dot(&u, &rhs);
    rhs.iter_mut().zip(&u).for_each(|(r, ui)| *r -= c * ui);

    let scale = 1.0 + t.inf_norm();
    let mut delta = 1e-6 * scale;
    let ldl = loop {
        count += 1;
        match t.factor_shifted(mu + delta) {
            Ok(f) => break f,
            Err(_) => delta *= 10.0,
        }
    };
    let mut v = vec![0.0; m];
    for _ in 0..200 {
        let tv = t.matvec(&v);
        let res: Vec<f64> = (0..m).map(|i| rhs[i] - tv[i] - mu * v[i]).collect();
        if norm2(&res) <= 1e-15 * scale * (1.0 + norm2(&v)) {
            break;
        }
        let mut dv = ldl.solve(&res);
        let c = dot(&u, &dv);
        dv.iter_mut().zip(&u).for_each(|(d, ui)| *d -= c * ui);
        v.iter_mut().zip(&dv).for_each(|(vi, d)| *vi += d);
    }

    let target = mu / sp;
    let tau = (target * target - dot(&v, &v)).max(0.0).sqrt();
    let tau = if u[0] * gamma > 0.0 { -tau } else { tau };
    v.iter_mut().zip(&u).for_each(|(vi, ui)| *vi += tau * ui);
    let v_norm = norm2(&v);
    CubicSolution {
        lambda: sigma * v_norm,
        shift: sp * v_norm,
        v,
        xi_min,
        xi_max,
        factorizations: count,
        hard_case: true,
    }
}
