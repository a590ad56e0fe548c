// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use super::{ComplexMatrix, C_ZERO};
use crate::error::{Error, Result};

const UNITARY_TOL: f64 = 1e-10;

/// Factors of `U = e^{−iα} A X B X C` with `ABC = I`.
///
/// Applying `A`, CNOT, `B`, CNOT, `C` to a target and the phase
/// `|0⟩⟨0| + e^{−iα}|1⟩⟨1|` to the control realizes controlled-`U`.
#[derive(Debug, Clone)]
pub struct SingleQubitDecomposition {
    pub alpha: f64,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub c: ComplexMatrix,
}

fn rz(theta: f64) -> ComplexMatrix {
    let half = theta / 2.0;
    ComplexMatrix::from_row_major(
        2,
        vec![
            Complex64::from_polar(1.0, -half),
            C_ZERO,
            C_ZERO,
            Complex64::from_polar(1.0, half),
        ],
    )
    .expect("2x2")
}

fn ry(theta: f64) -> ComplexMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    ComplexMatrix::from_row_major(
        2,
        vec![
            Complex64::new(c, 0.0),
            Complex64::new(-s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(c, 0.0),
        ],
    )
    .expect("2x2")
}

/// Z–Y–Z Euler split of a 2×2 unitary into the controlled-gate factors.
pub fn decompose_single_qubit(u: &ComplexMatrix) -> Result<SingleQubitDecomposition> {
    if u.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: u.dim(),
        });
    }
    let residual = u.unitarity_residual();
    if !(residual <= UNITARY_TOL) {
        return Err(Error::NotUnitary { residual });
    }

    // u = e^{iφ} V with det V = 1.
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let phi = det.arg() / 2.0;
    let unphase = Complex64::from_polar(1.0, -phi);
    let v00 = u[(0, 0)] * unphase;
    let v10 = u[(1, 0)] * unphase;

    // V = Rz(β) Ry(γ) Rz(δ).
    let gamma = 2.0 * v10.norm().atan2(v00.norm());
    let sum = if v00.norm() > 0.0 { -2.0 * v00.arg() } else { 0.0 };
    let diff = if v10.norm() > 0.0 { 2.0 * v10.arg() } else { 0.0 };
    let beta = (sum + diff) / 2.0;
    let delta = (sum - diff) / 2.0;

    let a = &rz(beta) * &ry(gamma / 2.0);
    let b = &ry(-gamma / 2.0) * &rz(-(delta + beta) / 2.0);
    let c = rz((delta - beta) / 2.0);
    Ok(SingleQubitDecomposition {
        alpha: -phi,
        a,
        b,
        c,
    })
}
