//! Trial-step computation.
//!
//! [`cg_newton_step`] runs CG on `H s = -g` and certifies an inexact Newton
//! step (`lambda = 0`) as soon as one passes the step conditions;
//! [`cubic_krylov_step`] minimizes the cubic model over growing Lanczos
//! subspaces and returns `(s, sigma ||s||)`.

mod cg;
mod cubic;

pub use cg::{cg_newton_step, CgKind, CgOutcome};
pub use cubic::cubic_krylov_step;

/// Work performed by subproblem solves.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub hvp: usize,
    pub factorizations: usize,
}
