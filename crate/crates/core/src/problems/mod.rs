//! Built-in test problems and finite-difference derivative checks.
//!
//! Every problem supplies analytic gradients and Hessian-vector products.
//! The suite mixes convex quadratics (for the pure Newton path), classic
//! curved valleys and singular minimizers, and nonconvex functions with
//! saddles that force the cubic path.

mod functions;

pub use functions::{
    Cosine, DiagonalQuadratic, IndefiniteQuartic, PowellSingular, Rosenbrock, RotatedQuadratic,
};

use crate::error::{check_len, Error, Result};
use crate::model::Problem;
use crate::vecops::{norm2, norm_inf};

/// A registered problem with its standard starting point.
#[derive(Clone)]
pub struct ProblemSpec {
    pub name: &'static str,
    pub dim: usize,
    pub x0: Vec<f64>,
    pub known_f_min: Option<f64>,
    /// Strictly convex quadratic (the Newton path alone should solve it).
    pub convex_quadratic: bool,
    factory: fn() -> Box<dyn Problem>,
}

impl ProblemSpec {
    pub fn build(&self) -> Box<dyn Problem> {
        (self.factory)()
    }
}

impl std::fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("known_f_min", &self.known_f_min)
            .finish()
    }
}

fn rosenbrock_start(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i % 2 == 0 { -1.2 } else { 1.0 })
        .collect()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

fn illcond_spectrum() -> Vec<f64> {
    (0..100)
        .map(|i| 10f64.powf(4.0 * i as f64 / 99.0))
        .collect()
}

fn indefinite_diag() -> Vec<f64> {
    (0..8).map(|i| -3.5 + i as f64).collect()
}

/// All built-in problems, in a fixed order.
pub fn registry() -> Vec<ProblemSpec> {
    vec![
        ProblemSpec {
            name: "rosenbrock2",
            dim: 2,
            x0: rosenbrock_start(2),
            known_f_min: Some(0.0),
            convex_quadratic: false,
            factory: || Box::new(Rosenbrock::new(2)),
        },
        ProblemSpec {
            name: "rosenbrock10",
            dim: 10,
            x0: rosenbrock_start(10),
            known_f_min: Some(0.0),
            convex_quadratic: false,
            factory: || Box::new(Rosenbrock::new(10)),
        },
        ProblemSpec {
            name: "quadratic5",
            dim: 5,
            x0: vec![1.0; 5],
            known_f_min: Some(0.0),
            convex_quadratic: true,
            factory: || Box::new(DiagonalQuadratic::new(linspace(1.0, 5.0, 5), None)),
        },
        ProblemSpec {
            name: "quadratic50",
            dim: 50,
            x0: vec![0.0; 50],
            known_f_min: Some(0.0),
            convex_quadratic: true,
            factory: || {
                Box::new(RotatedQuadratic::new(
                    linspace(1.0, 100.0, 50),
                    vec![1.0; 50],
                ))
            },
        },
        ProblemSpec {
            name: "illcond100",
            dim: 100,
            x0: vec![1.0; 100],
            known_f_min: Some(0.0),
            convex_quadratic: true,
            factory: || Box::new(DiagonalQuadratic::new(illcond_spectrum(), None)),
        },
        ProblemSpec {
            name: "indefquartic8",
            dim: 8,
            x0: vec![0.5; 8],
            known_f_min: Some(-5.25),
            convex_quadratic: false,
            factory: || Box::new(IndefiniteQuartic::new(indefinite_diag())),
        },
        ProblemSpec {
            name: "powell4",
            dim: 4,
            x0: vec![3.0, -1.0, 0.0, 1.0],
            known_f_min: Some(0.0),
            convex_quadratic: false,
            factory: || Box::new(PowellSingular),
        },
        ProblemSpec {
            name: "cosine20",
            dim: 20,
            x0: vec![1.0; 20],
            known_f_min: Some(-19.0),
            convex_quadratic: false,
            factory: || Box::new(Cosine::new(20)),
        },
    ]
}

/// Looks a problem up by name.
pub fn lookup(name: &str) -> Result<ProblemSpec> {
    registry()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownProblem(name.to_string()))
}

/// Largest relative error (denominator `max(1, |g_i|)`) between the analytic
/// gradient and central differences with step `h`.
pub fn fd_check_gradient<P: Problem + ?Sized>(problem: &P, x: &[f64], h: f64) -> Result<f64> {
    check_len(problem.dim(), x)?;
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "step h must be positive, got {h}"
        )));
    }
    let g = problem.gradient(x);
    let mut xp = x.to_vec();
    let mut worst = 0.0_f64;
    for i in 0..x.len() {
        xp[i] = x[i] + h;
        let fp = problem.value(&xp);
        xp[i] = x[i] - h;
        let fm = problem.value(&xp);
        xp[i] = x[i];
        let fd = (fp - fm) / (2.0 * h);
        worst = worst.max((fd - g[i]).abs() / g[i].abs().max(1.0));
    }
    Ok(worst)
}

/// Relative error `||Hv - fd|| / max(1, ||Hv||)` where `fd` is the central
/// difference of the gradient along the unit vector `v`.
pub fn fd_check_hvp<P: Problem + ?Sized>(problem: &P, x: &[f64], v: &[f64], h: f64) -> Result<f64> {
    check_len(problem.dim(), x)?;
    check_len(problem.dim(), v)?;
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "step h must be positive, got {h}"
        )));
    }
    if (norm2(v) - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidArgument(
            "direction v must have unit norm".into(),
        ));
    }
    let hv = problem.hess_vec(x, v);
    let xp: Vec<f64> = x.iter().zip(v).map(|(a, b)| a + h * b).collect();
    let xm: Vec<f64> = x.iter().zip(v).map(|(a, b)| a - h * b).collect();
    let gp = problem.gradient(&xp);
    let gm = problem.gradient(&xm);
    let diff: Vec<f64> = (0..x.len())
        .map(|i| hv[i] - (gp[i] - gm[i]) / (2.0 * h))
        .collect();
    Ok(norm2(&diff) / norm2(&hv).max(1.0))
}

/// `||g||_inf` at the standard start.
pub fn initial_grad_inf_norm(spec: &ProblemSpec) -> f64 {
    norm_inf(&spec.build().gradient(&spec.x0))
}
