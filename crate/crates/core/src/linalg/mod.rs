//! Krylov and tridiagonal kernels for the cubic subproblem.

mod lanczos;
mod secular;
mod tridiag;

use thiserror::Error;

pub use lanczos::KrylovWorkspace;
pub use secular::{reduced_cubic_value, secular_root, secular_root_from, CubicSolution};
pub use tridiag::{solve_shifted_tridiag, tridiag_smallest_eig, ShiftedLdl, Tridiag};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("starting vector has zero norm")]
    ZeroStart,

    #[error("Krylov subspace already has full dimension {0}")]
    FullDimension(usize),

    #[error("Krylov subspace is invariant; cannot expand")]
    Breakdown,

    #[error("shifted tridiagonal is not positive definite (pivot {index} = {pivot:e})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("tridiagonal shape mismatch: {diag} diagonal and {offdiag} off-diagonal entries")]
    Shape { diag: usize, offdiag: usize },

    #[error("vector length {got} does not match tridiagonal order {expected}")]
    Length { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
