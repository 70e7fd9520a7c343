//! Dense complex linear algebra: the matrix type, a Hermitian eigensolver,
//! spectral functions, tensor products and seeded sampling.

mod eigen;
mod matrix;
pub mod random;
mod tensor;

pub use eigen::{
    eig_hermitian, eigvals_hermitian, nuclear_norm, singular_values, sqrt_psd, sqrt_psd_with, trace_norm,
    EigenDecomposition,
};
pub use matrix::ComplexMatrix;
pub use random::{random_density, random_pure_vector, random_unitary, seeded, stream, SeededRng};
pub use tensor::{kron, matrix_unit, partial_trace, pauli_x, pauli_y, pauli_z, swap_operator, Factor};

pub(crate) use tensor::partial_trace_unchecked;

/// Vector helpers over `[Complex64]`.
pub mod vectors {
    pub use super::matrix::{basis_vector, inner, kron_vec, vec_norm};
}

pub use num_complex::Complex64;
