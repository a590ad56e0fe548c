// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use super::{qubits_for_dim, ComplexMatrix, C_ONE, C_ZERO};
use crate::error::{invalid, Error, Result};

/// Normalized pure state of an m-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Normalizes `amplitudes` on construction; the zero vector is rejected.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        qubits_for_dim(amplitudes.len())?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(invalid("amplitudes", "state vector must have finite nonzero norm"));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        qubits_for_dim(dim)?;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut amplitudes = vec![C_ZERO; dim];
        amplitudes[index] = C_ONE;
        Ok(Self { amplitudes })
    }

    /// Computational-basis state from a bit string such as `"0101"`; qubit 0 is the first character.
    pub fn from_bitstring(bits: &str) -> Result<Self> {
        let m = bits.chars().count();
        let mut index = 0usize;
        for ch in bits.chars() {
            index <<= 1;
            match ch {
                '0' => {}
                '1' => index |= 1,
                other => {
                    return Err(invalid(
                        "initial_state",
                        format!("unexpected character {other:?} in basis string {bits:?}"),
                    ))
                }
            }
        }
        if m == 0 || m > super::MAX_QUBITS {
            return Err(invalid("initial_state", format!("basis string {bits:?} has invalid length")));
        }
        Self::basis(1 << m, index)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// `U|ψ⟩`; the result is renormalized only against rounding drift.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<StateVector> {
        let v = u.apply(&self.amplitudes)?;
        StateVector::new(v)
    }

    /// `⟨ψ|A|ψ⟩` for an arbitrary (not necessarily Hermitian) operator.
    pub fn expectation(&self, a: &ComplexMatrix) -> Result<Complex64> {
        let av = a.apply(&self.amplitudes)?;
        inner(&self.amplitudes, &av)
    }

    pub fn with_global_phase(&self, phase: f64) -> StateVector {
        let p = Complex64::from_polar(1.0, phase);
        StateVector {
            amplitudes: self.amplitudes.iter().map(|a| a * p).collect(),
        }
    }

    /// Born probabilities in the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// `Σ conj(a_i) b_i`.
pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Result<Complex64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(inner_unchecked(a, b))
}

#[inline]
pub(crate) fn inner_unchecked(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}
