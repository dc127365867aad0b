use crate::model::Problem;
use crate::vecops::dot;

/// `f(x) = x'Dx/2 + b'x` with diagonal `D`.
#[derive(Debug, Clone)]
pub struct DiagonalQuadratic {
    diag: Vec<f64>,
    linear: Vec<f64>,
}

impl DiagonalQuadratic {
    pub fn new(diag: Vec<f64>, linear: Option<Vec<f64>>) -> Self {
        let linear = linear.unwrap_or_else(|| vec![0.0; diag.len()]);
        assert_eq!(diag.len(), linear.len());
        Self { diag, linear }
    }
}

impl Problem for DiagonalQuadratic {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.diag)
            .zip(&self.linear)
            .map(|((xi, di), bi)| 0.5 * di * xi * xi + bi * xi)
            .sum()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.diag)
            .zip(&self.linear)
            .map(|((xi, di), bi)| di * xi + bi)
            .collect()
    }

    fn hess_vec(&self, _x: &[f64], v: &[f64]) -> Vec<f64> {
        v.iter().zip(&self.diag).map(|(vi, di)| di * vi).collect()
    }
}

/// `f(x) = (x - c)' Q D Q (x - c) / 2` where `Q = I - 2ww'/w'w` is a
/// Householder reflector, so the spectrum is exactly `D`.
#[derive(Debug, Clone)]
pub struct RotatedQuadratic {
    spectrum: Vec<f64>,
    w: Vec<f64>,
    center: Vec<f64>,
}

impl RotatedQuadratic {
    pub fn new(spectrum: Vec<f64>, center: Vec<f64>) -> Self {
        let n = spectrum.len();
        assert_eq!(n, center.len());
        let w = (0..n).map(|i| 1.0 + (i % 7) as f64).collect();
        Self {
            spectrum,
            w,
            center,
        }
    }

    fn reflect(&self, v: &[f64]) -> Vec<f64> {
        let c = 2.0 * dot(&self.w, v) / dot(&self.w, &self.w);
        v.iter().zip(&self.w).map(|(vi, wi)| vi - c * wi).collect()
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut u = self.reflect(v);
        u.iter_mut()
            .zip(&self.spectrum)
            .for_each(|(ui, di)| *ui *= di);
        self.reflect(&u)
    }
}

impl Problem for RotatedQuadratic {
    fn dim(&self) -> usize {
        self.spectrum.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let d: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        0.5 * dot(&d, &self.apply(&d))
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let d: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        self.apply(&d)
    }

    fn hess_vec(&self, _x: &[f64], v: &[f64]) -> Vec<f64> {
        self.apply(v)
    }
}

/// Chained Rosenbrock:
/// `sum_{i < n-1} 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2`, minimized at all
/// ones. The registry uses even `n` so the standard start alternates
/// `(-1.2, 1)`.
#[derive(Debug, Clone)]
pub struct Rosenbrock {
    n: usize,
}

impl Rosenbrock {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "Rosenbrock needs at least two variables, got {n}");
        Self { n }
    }
}

impl Problem for Rosenbrock {
    fn dim(&self) -> usize {
        self.n
    }

    fn value(&self, x: &[f64]) -> f64 {
        x.windows(2)
            .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
            .sum()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.n];
        for i in 0..self.n - 1 {
            let e = x[i + 1] - x[i] * x[i];
            g[i] += -400.0 * x[i] * e - 2.0 * (1.0 - x[i]);
            g[i + 1] += 200.0 * e;
        }
        g
    }

    fn hess_vec(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for i in 0..self.n - 1 {
            let (u, w) = (x[i], x[i + 1]);
            let huu = 1200.0 * u * u - 400.0 * w + 2.0;
            let huw = -400.0 * u;
            out[i] += huu * v[i] + huw * v[i + 1];
            out[i + 1] += huw * v[i] + 200.0 * v[i + 1];
        }
        out
    }
}

/// Powell's singular function in four variables; its Hessian is singular
/// at the minimizer `x = 0`.
#[derive(Debug, Clone, Default)]
pub struct PowellSingular;

const POWELL_A: [f64; 4] = [1.0, 10.0, 0.0, 0.0];
const POWELL_B: [f64; 4] = [0.0, 0.0, 1.0, -1.0];
const POWELL_C: [f64; 4] = [0.0, 1.0, -2.0, 0.0];
const POWELL_D: [f64; 4] = [1.0, 0.0, 0.0, -1.0];

impl PowellSingular {
    fn terms(x: &[f64]) -> (f64, f64, f64, f64) {
        (
            dot(&POWELL_A, x),
            dot(&POWELL_B, x),
            dot(&POWELL_C, x),
            dot(&POWELL_D, x),
        )
    }
}

impl Problem for PowellSingular {
    fn dim(&self) -> usize {
        4
    }

    fn value(&self, x: &[f64]) -> f64 {
        let (a, b, c, d) = Self::terms(x);
        a * a + 5.0 * b * b + c.powi(4) + 10.0 * d.powi(4)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let (a, b, c, d) = Self::terms(x);
        (0..4)
            .map(|i| {
                2.0 * a * POWELL_A[i]
                    + 10.0 * b * POWELL_B[i]
                    + 4.0 * c.powi(3) * POWELL_C[i]
                    + 40.0 * d.powi(3) * POWELL_D[i]
            })
            .collect()
    }

    fn hess_vec(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        let (_, _, c, d) = Self::terms(x);
        let (va, vb, vc, vd) = Self::terms(v);
        (0..4)
            .map(|i| {
                2.0 * va * POWELL_A[i]
                    + 10.0 * vb * POWELL_B[i]
                    + 12.0 * c * c * vc * POWELL_C[i]
                    + 120.0 * d * d * vd * POWELL_D[i]
            })
            .collect()
    }
}

/// `sum_{i < n-1} cos(x_i^2 - x_{i+1}/2)`, bounded below by `-(n-1)` and
/// riddled with saddles.
#[derive(Debug, Clone)]
pub struct Cosine {
    n: usize,
}

impl Cosine {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        Self { n }
    }
}

impl Problem for Cosine {
    fn dim(&self) -> usize {
        self.n
    }

    fn value(&self, x: &[f64]) -> f64 {
        x.windows(2).map(|w| (w[0] * w[0] - 0.5 * w[1]).cos()).sum()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.n];
        for i in 0..self.n - 1 {
            let s = (x[i] * x[i] - 0.5 * x[i + 1]).sin();
            g[i] -= 2.0 * x[i] * s;
            g[i + 1] += 0.5 * s;
        }
        g
    }

    fn hess_vec(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for i in 0..self.n - 1 {
            let u = x[i] * x[i] - 0.5 * x[i + 1];
            let (s, c) = u.sin_cos();
            let du = 2.0 * x[i] * v[i] - 0.5 * v[i + 1];
            out[i] += -c * du * 2.0 * x[i] - 2.0 * s * v[i];
            out[i + 1] += 0.5 * c * du;
        }
        out
    }
}

/// Indefinite quadratic made bounded by a quartic: `x'Dx/2 + sum x_i^4 / 4`.
#[derive(Debug, Clone)]
pub struct IndefiniteQuartic {
    diag: Vec<f64>,
}

impl IndefiniteQuartic {
    pub fn new(diag: Vec<f64>) -> Self {
        Self { diag }
    }
}

impl Problem for IndefiniteQuartic {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.diag)
            .map(|(xi, di)| 0.5 * di * xi * xi + 0.25 * xi.powi(4))
            .sum()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.diag)
            .map(|(xi, di)| di * xi + xi.powi(3))
            .collect()
    }

    fn hess_vec(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.diag)
            .zip(v)
            .map(|((xi, di), vi)| (di + 3.0 * xi * xi) * vi)
            .collect()
    }
}
