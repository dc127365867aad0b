use std::collections::{BTreeMap, BTreeSet};

use anyhow::{bail, Result};
use clap::ValueEnum;
use serde::Serialize;

use crate::suite::SuiteRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Metric {
    Iterations,
    HvpCount,
}

impl Metric {
    fn of(self, row: &SuiteRow) -> f64 {
        match self {
            Metric::Iterations => row.iterations as f64,
            Metric::HvpCount => row.hvp_count as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub solver: String,
    pub alpha: f64,
    pub fraction: f64,
}

/// `alpha = 0, 0.1, ..., 10`
pub fn alpha_grid() -> Vec<f64> {
    (0..=100).map(|i| i as f64 / 10.0).collect()
}

/// Dolan–Moré profiles over the problems every solver converged on: for
/// each solver and `alpha`, the fraction of those problems where its metric
/// is within `2^alpha` of the best.
pub fn performance_profile(rows: &[SuiteRow], metric: Metric) -> Result<Vec<ProfilePoint>> {
    let solvers: BTreeSet<&str> = rows.iter().map(|r| r.solver.as_str()).collect();
    let mut by_problem: BTreeMap<&str, BTreeMap<&str, &SuiteRow>> = BTreeMap::new();
    for r in rows {
        if by_problem
            .entry(&r.problem)
            .or_default()
            .insert(&r.solver, r)
            .is_some()
        {
            bail!("duplicate row for ({}, {})", r.problem, r.solver);
        }
    }

    // ratio[solver][problem]
    let mut ratios: BTreeMap<&str, Vec<f64>> = solvers.iter().map(|s| (*s, Vec::new())).collect();
    for runs in by_problem.values() {
        let included = runs.len() == solvers.len() && runs.values().all(|r| r.converged());
        if !included {
            continue;
        }
        let best = runs
            .values()
            .map(|r| metric.of(r))
            .fold(f64::INFINITY, f64::min);
        for (solver, r) in runs {
            let m = metric.of(r);
            let ratio = if m == best { 1.0 } else { m / best };
            ratios.get_mut(solver).expect("known solver").push(ratio);
        }
    }
    let included = ratios.values().next().map_or(0, Vec::len);
    if included == 0 {
        bail!("no problem was solved by every solver; the profile is empty");
    }

    let mut points = Vec::new();
    for (solver, rs) in &ratios {
        for alpha in alpha_grid() {
            let bound = 2f64.powf(alpha);
            let hits = rs.iter().filter(|&&r| r <= bound).count();
            points.push(ProfilePoint {
                solver: solver.to_string(),
                alpha,
                fraction: hits as f64 / included as f64,
            });
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(problem: &str, solver: &str, iterations: usize, status: &str) -> SuiteRow {
        SuiteRow {
            problem: problem.into(),
            solver: solver.into(),
            status: status.into(),
            iterations,
            accepted: iterations,
            newton_steps: 0,
            hvp_count: 2 * iterations,
            tridiag_factorizations: 0,
            final_f: 0.0,
            final_grad_inf_norm: 0.0,
            wall_secs: 0.0,
        }
    }

    fn at(points: &[ProfilePoint], solver: &str, alpha: f64) -> f64 {
        points
            .iter()
            .find(|p| p.solver == solver && p.alpha == alpha)
            .unwrap()
            .fraction
    }

    #[test]
    fn identical_metrics_give_one_everywhere() {
        let rows = vec![row("p", "a", 5, "Converged"), row("p", "b", 5, "Converged")];
        let pts = performance_profile(&rows, Metric::Iterations).unwrap();
        assert_eq!(pts.len(), 2 * 101);
        assert!(pts.iter().all(|p| p.fraction == 1.0));
    }

    #[test]
    fn double_cost_steps_at_alpha_one() {
        let rows = vec![
            row("p", "a", 10, "Converged"),
            row("p", "b", 5, "Converged"),
            row("q", "a", 8, "Converged"),
            row("q", "b", 4, "Converged"),
        ];
        let pts = performance_profile(&rows, Metric::HvpCount).unwrap();
        assert_eq!(at(&pts, "a", 0.0), 0.0);
        assert_eq!(at(&pts, "a", 0.9), 0.0);
        assert_eq!(at(&pts, "a", 1.0), 1.0);
        assert_eq!(at(&pts, "b", 0.0), 1.0);
    }

    #[test]
    fn problems_with_a_failure_are_excluded() {
        let rows = vec![
            row("p", "a", 10, "Converged"),
            row("p", "b", 5, "Converged"),
            row("q", "a", 1, "Converged"),
            row("q", "b", 1, "MaxIters"),
        ];
        let pts = performance_profile(&rows, Metric::Iterations).unwrap();
        assert_eq!(at(&pts, "a", 0.0), 0.0);
        assert_eq!(at(&pts, "b", 0.0), 1.0);
    }

    #[test]
    fn empty_profile_is_an_error() {
        let rows = vec![row("q", "a", 1, "Converged"), row("q", "b", 1, "TimeLimit")];
        assert!(performance_profile(&rows, Metric::Iterations).is_err());
    }
}
