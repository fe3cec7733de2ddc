//! Dense complex linear algebra.
//!
//! Vectorization is column-stacking throughout the crate, so the map
//! `A ↦ X A Y` has matrix `kron(Yᵀ, X)`.

mod eig;
mod expm;
mod matrix;

pub use eig::{hermitian_eig, is_psd, min_eig_hermitian, HermitianEigen, HERMITIAN_TOL};
pub use expm::{expm, inverse, matrix_power};
pub use matrix::{kron, unvec, vec, ComplexMatrix, C64, I, ONE, ZERO};
