// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra and Pauli algebra on m-qubit operator spaces.
//!
//! Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
//! computational-basis index.

mod decompose;
mod hermitian;
mod matrix;
mod pauli;
pub mod random;
mod state;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use decompose::{decompose_single_qubit, SingleQubitDecomposition};
pub use hermitian::{expm_hermitian, HermitianOperator, SpectralDecomposition};
pub use matrix::{frobenius_inner, kron, ComplexMatrix};
pub use pauli::{pauli_decompose, reconstruct, Pauli, PauliTerm, PauliWord};
pub use state::StateVector;

/// Register-size cap for dense storage.
pub const MAX_QUBITS: usize = 10;

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const C_I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Returns m for `dim = 2^m`, rejecting anything outside `1..=MAX_QUBITS`.
pub fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::InvalidDimension(dim));
    }
    let m = dim.trailing_zeros() as usize;
    if m > MAX_QUBITS {
        return Err(Error::InvalidDimension(dim));
    }
    Ok(m)
}

/// Bit of `qubit` in basis index `index` of an `m`-qubit register.
#[inline]
pub fn qubit_bit(index: usize, qubit: usize, m: usize) -> usize {
    (index >> (m - 1 - qubit)) & 1
}

/// Embeds a 2×2 operator acting on `qubit` into the m-qubit space.
pub fn embed_single(op: &ComplexMatrix, qubit: usize, m: usize) -> Result<ComplexMatrix> {
    if op.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: op.dim(),
        });
    }
    if qubit >= m {
        return Err(Error::IndexOutOfRange {
            index: qubit,
            len: m,
        });
    }
    let dim = 1usize << m;
    let mut out = ComplexMatrix::zeros(dim)?;
    for i in 0..dim {
        let bi = qubit_bit(i, qubit, m);
        for bj in 0..2 {
            let v = op[(bi, bj)];
            if v == C_ZERO {
                continue;
            }
            let j = if bi == bj { i } else { i ^ (1 << (m - 1 - qubit)) };
            out[(i, j)] = v;
        }
    }
    Ok(out)
}

/// Single-qubit Pauli-X.
pub fn pauli_x() -> ComplexMatrix {
    Pauli::X.matrix()
}

pub fn pauli_y() -> ComplexMatrix {
    Pauli::Y.matrix()
}

pub fn pauli_z() -> ComplexMatrix {
    Pauli::Z.matrix()
}

pub fn identity2() -> ComplexMatrix {
    Pauli::I.matrix()
}
