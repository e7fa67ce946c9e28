//! Relative Gel'fand–Kalinin–Fuks cohomology of formal Hamiltonian vector
//! fields on the plane, computed weight by weight with exact arithmetic.

pub mod coboundary;
pub mod complex;
pub mod exactlin;
pub mod oracle;
pub mod partitions;
pub mod sl2rep;

pub use exactlin::{LinalgError, Rational, SparseMatrix, SparseVector};
pub use partitions::{count_partitions, enumerate_types, TypeSignature};
pub use sl2rep::{cochain_dimension, dims_row, Character, Decomposition, DimsRow};
