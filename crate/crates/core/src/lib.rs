//! Matrix-free solvers for smooth unconstrained nonconvex optimization.
//!
//! Two outer loops share the same machinery:
//!
//! * [`driver::irnewton_solve`] is a hybrid regularized Newton method. While the
//!   lower bound on the regularization ratio is zero it tries an inexact Newton
//!   step from truncated CG; otherwise (or when CG hits negative curvature) it
//!   minimizes a cubic model over expanding Krylov subspaces.
//! * [`driver::iarc_solve`] is an inexact adaptive cubic regularization
//!   baseline that always takes the Krylov cubic step.
//!
//! Every trial pair `(s, lambda)` is certified against the sufficient-decrease,
//! subspace-optimality and residual conditions in [`model::check_step_conditions`]
//! before the objective is evaluated at the trial point.
//!
//! Objectives only need to provide values, gradients and Hessian-vector
//! products through the [`Problem`] trait.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod driver;
pub mod error;
pub mod linalg;
pub mod model;
pub mod problems;
pub mod subproblem;
pub mod vecops;

pub use config::SolverConfig;
pub use driver::{iarc_solve, irnewton_solve, IterationRecord, RunReport, SolverKind, Status};
pub use error::{Error, Result};
pub use model::{Bounds, ConditionReport, Problem, StepCandidate};
