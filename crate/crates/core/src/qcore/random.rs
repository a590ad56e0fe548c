// SPDX-License-Identifier: Apache-2.0

//! Seeded random operators and states for tests, oracles and synthetic problems.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, HermitianOperator, StateVector, C_ZERO};
use crate::error::Result;

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_matrix(dim: usize, rng: &mut impl Rng) -> Result<ComplexMatrix> {
    let data = (0..dim * dim).map(|_| gaussian(rng)).collect();
    ComplexMatrix::from_row_major(dim, data)
}

/// `(A + A†)/2` with i.i.d. complex Gaussian `A`.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> Result<HermitianOperator> {
    let a = random_matrix(dim, rng)?;
    let mut h = ComplexMatrix::zeros(dim)?;
    for i in 0..dim {
        for j in 0..dim {
            h[(i, j)] = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
        }
    }
    HermitianOperator::new(h, "random")
}

/// Haar-distributed unitary from Gram–Schmidt on a Gaussian matrix.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> Result<ComplexMatrix> {
    let a = random_matrix(dim, rng)?;
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v: Vec<Complex64> = (0..dim).map(|i| a[(i, j)]).collect();
        // Two passes of modified Gram–Schmidt keep orthogonality near machine precision.
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex64 = q.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        cols.push(v);
    }
    let mut u = ComplexMatrix::zeros(dim)?;
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            u[(i, j)] = *x;
        }
    }
    Ok(u)
}

pub fn random_state(dim: usize, rng: &mut impl Rng) -> Result<StateVector> {
    let mut amps: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
    if amps.iter().all(|a| *a == C_ZERO) {
        amps[0] = Complex64::new(1.0, 0.0);
    }
    StateVector::new(amps)
}
