//! Exact integer linear algebra: sparse matrices, Smith normal form, group
//! presentations and linear solving over the supported coefficient domains.

pub mod lattice;
pub mod matrix;
pub mod presentation;
pub mod snf;
pub mod solve;

pub use matrix::{BigMatrix, DenseMatrix, IntMatrix};
pub use presentation::Presentation;
pub use snf::{invariant_factors, rank, snf, snf_right, SnfResult};
pub use solve::solve;
