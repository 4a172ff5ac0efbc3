//! Linear algebra over F2.

pub mod bitmatrix;
pub mod bitvec;
pub mod symplectic;

pub use bitmatrix::{parse_f2_text, BitMatrix};
pub use bitvec::{symplectic_inner, BitVector, MAX_BITS};
pub use symplectic::{
    bruhat_decompose, compose_transvections, dual_space, f_d, f_omega, f_u, partial_identity, transvection,
    transvection_decompose, BruhatDecomposition, InnerForm, SymplecticMatrix,
};
