//! Exact sparse linear algebra over the rationals.
//!
//! Ranks come from exact fraction-free elimination, with a modular run used
//! only to predict the pivot sequence. Kernels are recovered from several
//! modular images by Chinese remaindering and rational reconstruction, then
//! certified exactly: every returned vector is checked to satisfy `M v = 0`, and
//! since a rank over GF(p) never exceeds the rank over Q, a full set of such
//! vectors is a basis. If reconstruction does not settle, the exact
//! elimination path computes the kernel directly.

mod elim;
mod kernel;
mod primes;
mod rational;
mod reconstruct;
mod sparse;

use thiserror::Error;

pub use kernel::{
    kernel_basis, kernel_basis_exact, rank, rank_dense_oracle, rank_mod_p, rref_rows,
    solve_in_span, SpanSolver,
};
pub use primes::PRIMES;
pub use rational::Rational;
pub use reconstruct::rational_reconstruct;
pub use sparse::{matmul, SparseMatrix, SparseVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {left:?} against {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("index {index:?} out of bounds for shape {shape:?}")]
    OutOfBounds {
        index: (usize, usize),
        shape: (usize, usize),
    },
    #[error("target vector is not in the span of the basis")]
    NotInSpan,
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("parse error: {0}")]
    Parse(String),
}
