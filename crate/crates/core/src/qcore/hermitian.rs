// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{ComplexMatrix, C_ZERO};
use crate::error::{Error, Result};

/// Absolute bound on `‖H − H†‖_F` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A dense Hermitian operator with a human-readable label.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    label: String,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        let residual = matrix.hermiticity_residual();
        if !(residual <= HERMITIAN_TOL) {
            return Err(Error::NotHermitian { label, residual });
        }
        Ok(Self { matrix, label })
    }

    pub fn zeros(dim: usize, label: impl Into<String>) -> Result<Self> {
        Self::new(ComplexMatrix::zeros(dim)?, label)
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn num_qubits(&self) -> usize {
        self.matrix.num_qubits()
    }

    /// Eigendecomposition with eigenvalues in ascending order.
    pub fn eigen(&self) -> SpectralDecomposition {
        let n = self.dim();
        let dm = DMatrix::from_fn(n, n, |i, j| self.matrix[(i, j)]);
        let eig = dm.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let mut vectors = ComplexMatrix::zeros(n).expect("dimension validated at construction");
        for (col, &k) in order.iter().enumerate() {
            for row in 0..n {
                vectors[(row, col)] = eig.eigenvectors[(row, k)];
            }
        }
        SpectralDecomposition { values, vectors }
    }
}

/// `H = V diag(λ) V†` with eigenvectors as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl SpectralDecomposition {
    /// Reassembles `V diag(f(λ)) V†`.
    pub fn apply_function(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.values.len();
        let fvals: Vec<Complex64> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n).expect("dimension validated at construction");
        let v = &self.vectors;
        for i in 0..n {
            for k in 0..n {
                let vik = v[(i, k)] * fvals[k];
                if vik == C_ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        let n = self.values.len();
        (0..n).map(|i| self.vectors[(i, k)]).collect()
    }
}

/// `exp(−i t H)` via Hermitian eigendecomposition.
pub fn expm_hermitian(h: &HermitianOperator, t: f64) -> ComplexMatrix {
    if t == 0.0 {
        return ComplexMatrix::identity(h.dim()).expect("dimension validated at construction");
    }
    h.eigen()
        .apply_function(|lambda| Complex64::from_polar(1.0, -t * lambda))
}
