//! Generators of quantum dynamical semigroups on N-level systems.
//!
//! A generator is a linear map L on N×N complex matrices, stored as the
//! N²×N² matrix acting on column-stacked vectors. The crate decomposes such
//! maps into GKSL form (Hamiltonian part plus weighted jump operators),
//! classifies them, and certifies positivity of the semigroup e^{tL}.

pub mod basis;
pub mod certify;
pub mod cli;
pub mod error;
pub mod gksl;
pub mod io;
pub mod linalg;
pub mod random;
pub mod semigroup;
pub mod superop;

pub use basis::{gell_mann_basis, matrix_units, HSBasis};
pub use error::{QdsError, Result};
pub use gksl::{
    classify, decompose_gksl, decompose_k_form, reconstruct_gksl, reconstruct_k, sample_generator, GeneratorClass,
    GksForm, Jump, KForm, Verdict,
};
pub use linalg::{ComplexMatrix, C64};
pub use superop::{CoeffMatrix, SuperOperator};
