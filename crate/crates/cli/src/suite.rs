use std::io::{Read, Write};

use anyhow::{bail, Context, Result};
use irnewton::problems::ProblemSpec;
use irnewton::{SolverConfig, SolverKind};
use rayon::prelude::*;
use serde::Deserialize;

use crate::run::start_point;

pub const SUITE_HEADER: [&str; 11] = [
    "problem",
    "solver",
    "status",
    "iterations",
    "accepted",
    "newton_steps",
    "hvp_count",
    "tridiag_factorizations",
    "final_f",
    "final_grad_inf_norm",
    "wall_secs",
];

/// One `(problem, solver)` result.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct SuiteRow {
    pub problem: String,
    pub solver: String,
    pub status: String,
    pub iterations: usize,
    pub accepted: usize,
    pub newton_steps: usize,
    pub hvp_count: usize,
    pub tridiag_factorizations: usize,
    pub final_f: f64,
    pub final_grad_inf_norm: f64,
    pub wall_secs: f64,
}

impl SuiteRow {
    pub fn converged(&self) -> bool {
        self.status == "Converged"
    }

    fn record(&self) -> [String; 11] {
        [
            self.problem.clone(),
            self.solver.clone(),
            self.status.clone(),
            self.iterations.to_string(),
            self.accepted.to_string(),
            self.newton_steps.to_string(),
            self.hvp_count.to_string(),
            self.tridiag_factorizations.to_string(),
            format!("{:.16e}", self.final_f),
            format!("{:.16e}", self.final_grad_inf_norm),
            format!("{:.16e}", self.wall_secs),
        ]
    }
}

/// Runs both solvers on every problem, in parallel over pairs. Rows come
/// back sorted by `(problem, solver)`.
pub fn run_suite(
    problems: &[ProblemSpec],
    cfg: &SolverConfig,
    seed: Option<u64>,
) -> Result<Vec<SuiteRow>> {
    let pairs: Vec<(&ProblemSpec, SolverKind)> = problems
        .iter()
        .flat_map(|p| [SolverKind::Irnewton, SolverKind::Iarc].map(|s| (p, s)))
        .collect();
    let mut rows = pairs
        .par_iter()
        .map(|&(spec, solver)| {
            let problem = spec.build();
            let x0 = start_point(spec, seed);
            let r = solver
                .solve(&problem, &x0, cfg)
                .with_context(|| format!("{} on {}", solver.name(), spec.name))?;
            Ok(SuiteRow {
                problem: spec.name.to_string(),
                solver: solver.name().to_string(),
                status: r.status.name().to_string(),
                iterations: r.iterations,
                accepted: r.accepted,
                newton_steps: r.newton_steps,
                hvp_count: r.hvp_count,
                tridiag_factorizations: r.tridiag_factorizations,
                final_f: r.final_f,
                final_grad_inf_norm: r.final_grad_inf_norm,
                wall_secs: r.wall_secs,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| (&a.problem, &a.solver).cmp(&(&b.problem, &b.solver)));
    Ok(rows)
}

pub fn write_suite_csv<W: Write>(out: W, rows: &[SuiteRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUITE_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a suite CSV, insisting on the exact header.
pub fn read_suite_csv<R: Read>(input: R) -> Result<Vec<SuiteRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(SUITE_HEADER) {
        bail!(
            "unexpected suite header: {}",
            header.iter().collect::<Vec<_>>().join(",")
        );
    }
    let rows = r
        .deserialize()
        .collect::<std::result::Result<Vec<SuiteRow>, _>>()?;
    Ok(rows)
}
