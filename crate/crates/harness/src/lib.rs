// SPDX-License-Identifier: Apache-2.0

//! Experiment orchestration for VQOC and VQE runs: configuration, exact
//! reference energies, bound diagnostics and CSV/JSON artifacts.

pub mod bounds;
pub mod config;
pub mod error;
pub mod reference;
pub mod run;

pub use config::{ExperimentConfig, Mode, Overrides};
pub use error::{HarnessError, Result};
pub use run::{run_experiment, RunArtifacts};
