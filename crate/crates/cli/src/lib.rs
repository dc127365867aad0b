//! Benchmark harness for the `irnewton` solvers: single runs, the built-in
//! suite as CSV, and Dolan–Moré performance profiles computed from that CSV.

pub mod profile;
pub mod run;
pub mod suite;

pub use profile::{performance_profile, Metric, ProfilePoint};
pub use run::{load_config, start_point, RunRecord};
pub use suite::{read_suite_csv, run_suite, write_suite_csv, SuiteRow, SUITE_HEADER};
