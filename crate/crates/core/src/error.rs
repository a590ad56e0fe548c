// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the core numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is not 2^m with 1 <= m <= {max}", max = crate::qcore::MAX_QUBITS)]
    InvalidDimension(usize),

    #[error("operator `{label}` is not Hermitian (residual {residual:.3e})")]
    NotHermitian { label: String, residual: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("energy has imaginary residual {residual:.3e}")]
    ComplexEnergy { residual: f64 },

    #[error("control operator `{label}` cannot be split into at most {max} weighted unitaries")]
    UnsplittableControl { label: String, max: usize },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
