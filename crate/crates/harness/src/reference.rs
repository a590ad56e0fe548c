// SPDX-License-Identifier: Apache-2.0

//! Exact-diagonalization reference and accuracy reporting.

use serde::Serialize;
use vqoc_core::qcore::{HermitianOperator, StateVector};
use vqoc_core::trace::OptimizationTrace;

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub state: StateVector,
    /// `‖Hv − e₀v‖₂`.
    pub residual: f64,
}

/// Smallest eigenvalue of `h` and a unit eigenvector.
pub fn exact_ground(h: &HermitianOperator) -> GroundState {
    let spectral = h.eigen();
    let energy = spectral.values[0];
    let state = StateVector::new(spectral.vector(0)).expect("eigenvectors are unit norm");
    let hv = h.matrix().apply(state.amplitudes()).expect("eigenvector has the operator's dimension");
    let residual = hv
        .iter()
        .zip(state.amplitudes())
        .map(|(a, b)| (a - b * energy).norm_sqr())
        .sum::<f64>()
        .sqrt();
    GroundState {
        energy,
        state,
        residual,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccuracyReport {
    pub final_energy: f64,
    pub best_energy: f64,
    pub reference: f64,
    /// `|E_final − e₀|`.
    pub error: f64,
    pub threshold: f64,
    /// Only judged for Hamiltonians declared in Hartree.
    pub attained: Option<bool>,
    pub units: Option<String>,
}

pub fn chemical_accuracy_report(
    trace: &OptimizationTrace,
    e0: f64,
    threshold: f64,
    units: Option<&str>,
) -> AccuracyReport {
    let error = (trace.final_energy - e0).abs();
    let hartree = units.is_some_and(|u| u.eq_ignore_ascii_case("hartree"));
    AccuracyReport {
        final_energy: trace.final_energy,
        best_energy: trace.best_energy,
        reference: e0,
        error,
        threshold,
        attained: hartree.then_some(error < threshold),
        units: units.map(str::to_owned),
    }
}
