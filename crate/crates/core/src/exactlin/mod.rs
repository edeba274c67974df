//! Exact linear algebra over the rationals or a prime field.
//!
//! All elimination is deterministic: rows are inserted in index order and the pivot of
//! each row is its first nonzero column. The reduced row echelon form is unique, so the
//! sparse and dense paths return identical results.

mod cohomology;
mod complex;
mod matrix;
mod scalar;
mod sparse;

pub use cohomology::{cohomology_dim, span_rank, CohomologyDegree};
pub use complex::{CochainComplex, Cohomology};
pub use matrix::{Matrix, Rref, SparseEchelon, DEFAULT_DENSITY_THRESHOLD};
pub use scalar::{Field, Rational, Scalar};
pub use sparse::SparseVector;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("{0} is not a prime below 2^31")]
    BadPrime(u64),
    #[error("cannot parse scalar {0:?}")]
    BadScalar(String),
    #[error("dimension mismatch in {context}: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        context: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("vector is not a cocycle")]
    NotACocycle,
}
