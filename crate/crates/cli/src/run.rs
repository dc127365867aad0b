use std::path::Path;

use anyhow::{Context, Result};
use irnewton::problems::ProblemSpec;
use irnewton::{RunReport, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Reads a JSON object of `SolverConfig` overrides. Missing keys keep their
/// defaults; unknown keys and invalid values are errors.
pub fn load_config(path: Option<&Path>) -> Result<SolverConfig> {
    let cfg = match path {
        None => SolverConfig::default(),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading config {}", p.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("parsing config {}", p.display()))?
        }
    };
    cfg.validate()?;
    Ok(cfg)
}

/// The problem's standard start, or with a seed, the start plus a
/// reproducible perturbation drawn from `0.1 * U[-1, 1]^n`.
///
/// The stream depends on the seed and the problem name only, so a problem's
/// start does not change with the rest of the suite.
pub fn start_point(spec: &ProblemSpec, seed: Option<u64>) -> Vec<f64> {
    let Some(seed) = seed else {
        return spec.x0.clone();
    };
    let salt = spec.name.bytes().fold(0xcbf2_9ce4_8422_2325_u64, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt);
    spec.x0
        .iter()
        .map(|x| x + 0.1 * rng.gen_range(-1.0..=1.0))
        .collect()
}

/// The JSON document printed by `irnewton run`.
#[derive(Debug, Serialize)]
pub struct RunRecord<'a> {
    pub problem: &'a str,
    pub dim: usize,
    pub seed: Option<u64>,
    pub solver: &'static str,
    pub status: &'static str,
    pub iterations: usize,
    pub accepted: usize,
    pub newton_steps: usize,
    pub hvp_count: usize,
    pub tridiag_factorizations: usize,
    pub final_f: f64,
    pub final_grad_inf_norm: f64,
    pub initial_grad_inf_norm: f64,
    pub wall_secs: f64,
    pub config: &'a SolverConfig,
}

impl<'a> RunRecord<'a> {
    pub fn new(
        spec: &'a ProblemSpec,
        seed: Option<u64>,
        report: &RunReport,
        config: &'a SolverConfig,
    ) -> Self {
        Self {
            problem: spec.name,
            dim: spec.dim,
            seed,
            solver: report.solver.name(),
            status: report.status.name(),
            iterations: report.iterations,
            accepted: report.accepted,
            newton_steps: report.newton_steps,
            hvp_count: report.hvp_count,
            tridiag_factorizations: report.tridiag_factorizations,
            final_f: report.final_f,
            final_grad_inf_norm: report.final_grad_inf_norm,
            initial_grad_inf_norm: report.initial_grad_inf_norm,
            wall_secs: report.wall_secs,
            config,
        }
    }
}
