//! Exact arithmetic over cyclotomic fields and the matrix algebra built on it.

pub mod cyclotomic;
pub mod jordan;
pub mod matrix;
pub mod poly;
pub mod subspace;

pub use cyclotomic::CycScalar;
pub use jordan::{eigen_projectors, jordan_chevalley};
pub use matrix::{kernel_basis, ExactMatrix, ExactVector};
pub use poly::Poly;
pub use subspace::Subspace;
