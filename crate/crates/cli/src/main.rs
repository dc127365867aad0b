use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use irnewton::problems::{lookup, registry};
use irnewton::{SolverKind, Status};
use irnewton_cli::{
    load_config, performance_profile, read_suite_csv, run_suite, start_point, write_suite_csv,
    Metric, RunRecord,
};

#[derive(Parser)]
#[command(
    name = "irnewton",
    version,
    about = "Inexact regularized Newton / inexact ARC benchmark harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one solver on one built-in problem and print a JSON record.
    Run {
        #[arg(long)]
        problem: String,
        /// irnewton or iarc
        #[arg(long)]
        solver: String,
        /// JSON file overriding solver parameters
        #[arg(long)]
        config: Option<PathBuf>,
        /// Perturb the standard start reproducibly
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run both solvers on the suite and write one CSV row per pair.
    Suite {
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated problem names (default: all)
        #[arg(long, value_delimiter = ',')]
        problems: Option<Vec<String>>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compute performance profiles from a suite CSV.
    Profile {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, value_enum)]
        metric: Metric,
        /// Output path (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn execute(command: Command) -> Result<ExitCode> {
    match command {
        Command::Run {
            problem,
            solver,
            config,
            seed,
        } => {
            let spec = lookup(&problem)?;
            let solver: SolverKind = solver.parse().map_err(anyhow::Error::msg)?;
            let cfg = load_config(config.as_deref())?;
            let x0 = start_point(&spec, seed);
            let report = solver.solve(&spec.build(), &x0, &cfg)?;
            let record = RunRecord::new(&spec, seed, &report, &cfg);
            println!("{}", serde_json::to_string_pretty(&record)?);
            Ok(if report.status == Status::Converged {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Suite {
            out,
            problems,
            config,
            seed,
        } => {
            let specs = match problems {
                None => registry(),
                Some(names) => names
                    .iter()
                    .map(|n| lookup(n.trim()))
                    .collect::<Result<_, _>>()?,
            };
            let cfg = load_config(config.as_deref())?;
            let rows = run_suite(&specs, &cfg, seed)?;
            let file = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            write_suite_csv(BufWriter::new(file), &rows)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Profile { csv, metric, out } => {
            let file = File::open(&csv).with_context(|| format!("opening {}", csv.display()))?;
            let rows =
                read_suite_csv(file).with_context(|| format!("reading {}", csv.display()))?;
            let points = performance_profile(&rows, metric)?;
            let sink: Box<dyn Write> = match out {
                Some(p) => {
                    Box::new(File::create(&p).with_context(|| format!("creating {}", p.display()))?)
                }
                None => Box::new(io::stdout().lock()),
            };
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(["solver", "alpha", "fraction"])?;
            for p in points {
                w.write_record([
                    p.solver,
                    format!("{:.1}", p.alpha),
                    format!("{:.16e}", p.fraction),
                ])?;
            }
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
