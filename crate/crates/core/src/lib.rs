// SPDX-License-Identifier: Apache-2.0

//! Pulse-level variational quantum optimal control.
//!
//! The crate finds ground-state energies of small qubit Hamiltonians by
//! optimizing piecewise-constant complex control pulses with adjoint
//! gradients, and ships a gate-based VQE baseline plus a shot-level simulator
//! of the ancilla measurement scheme used to estimate those gradients.

pub mod error;
pub mod hamiltonians;
pub mod propagate;
pub mod qcore;
pub mod shotsim;
pub mod trace;
pub mod vqe;
pub mod vqoc;

pub use error::{Error, Result};
