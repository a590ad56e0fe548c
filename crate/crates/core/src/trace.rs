// SPDX-License-Identifier: Apache-2.0

//! Per-iteration optimization records shared by the VQOC and VQE drivers.

use serde::Serialize;

use crate::propagate::Pulse;
use crate::shotsim::QeLedger;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Energy `⟨ψ(T)|H_mol|ψ(T)⟩` of the current iterate.
    pub j1: f64,
    pub j2: f64,
    pub total: f64,
    /// Accepted step size (Armijo α for VQOC, gain a_k for VQE); 0 for the initial point.
    pub step_size: f64,
    pub gradient_norm: f64,
    pub qe_cumulative: u64,
    /// Wall-clock time since the run started, in ms.
    pub elapsed_ms: f64,
}

/// Why a run stopped before exhausting its iteration budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    /// No Armijo step met the sufficient-decrease condition.
    Stagnated,
    /// Total gradient norm fell below the configured tolerance.
    Converged,
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizationTrace {
    /// Initial point followed by one record per accepted iteration.
    pub records: Vec<IterationRecord>,
    pub termination: Termination,
    pub final_energy: f64,
    /// Lowest energy over all recorded iterates.
    pub best_energy: f64,
    /// Device time of one state preparation in ms (T for VQOC, d(τ_g+τ_V) for VQE).
    pub total_time: f64,
    pub qe: QeLedger,
    #[serde(skip)]
    pub final_pulse: Option<Pulse>,
    pub final_theta: Option<Vec<f64>>,
}

impl OptimizationTrace {
    pub(crate) fn new(initial: IterationRecord, total_time: f64, qe: QeLedger) -> Self {
        Self {
            records: vec![initial],
            termination: Termination::Completed,
            final_energy: initial.j1,
            best_energy: initial.j1,
            total_time,
            qe,
            final_pulse: None,
            final_theta: None,
        }
    }

    pub(crate) fn push(&mut self, record: IterationRecord) {
        self.final_energy = record.j1;
        self.best_energy = self.best_energy.min(record.j1);
        self.records.push(record);
    }

    /// Accepted iterations (records minus the initial point).
    pub fn iterations(&self) -> usize {
        self.records.len() - 1
    }

    pub fn stagnated(&self) -> bool {
        self.termination == Termination::Stagnated
    }
}
