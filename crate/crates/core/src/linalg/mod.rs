//! Exact sparse linear algebra over ℚ and 𝔽_p.

mod elim;
mod matrix;
mod scalar;

use thiserror::Error;

pub use elim::{kernel_image, quotient_basis, rank, solve, solve_dense, Echelon, KernelImage, Quotient};
pub use matrix::{add_entry, axpy, scaled, unit_vec, Matrix, SparseVec};
pub use scalar::{is_prime, FieldError, Fp, Scalar, ScalarField, MAX_MODULUS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    OutOfBounds { row: usize, col: usize, rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}
