// SPDX-License-Identifier: Apache-2.0

//! Experiment configuration: a JSON document with unknown keys rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use vqoc_core::hamiltonians::{ControlFamilies, DriftSpec};
use vqoc_core::shotsim::Shots;
use vqoc_core::vqe::SpsaConfig;
use vqoc_core::vqoc::{InitialPulse, VqocConfig};

use crate::error::{config_error, io_error, HarnessError, Result};

/// Default chemical-accuracy threshold in Hartree.
pub const CHEMICAL_ACCURACY: f64 = 1.6e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Vqoc,
    Vqe,
    Compare,
    Sweep,
    Diagnostics,
}

impl Mode {
    pub fn uses_vqoc(self) -> bool {
        matches!(self, Mode::Vqoc | Mode::Compare | Mode::Sweep)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HamiltonianSource {
    /// Pauli-term file.
    File { path: PathBuf },
    /// `(A + A†)/2` with i.i.d. complex Gaussian entries on `qubits` qubits.
    Random { qubits: usize, seed: u64 },
    /// Inline Pauli terms, e.g. `[[1.0, "Z"]]`.
    Terms {
        qubits: usize,
        terms: Vec<(f64, String)>,
        #[serde(default)]
        units: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DriftConfig {
    #[serde(default = "default_c6")]
    pub c6: f64,
    #[serde(default = "default_r")]
    pub r: f64,
}

fn default_c6() -> f64 {
    0.1
}
fn default_r() -> f64 {
    1.0
}

impl Default for DriftConfig {
    fn default() -> Self {
        Self {
            c6: default_c6(),
            r: default_r(),
        }
    }
}

impl DriftConfig {
    pub fn spec(&self, m: usize) -> vqoc_core::Result<DriftSpec> {
        DriftSpec::new(m, self.c6, self.r)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AnsatzConfig {
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_tau_g")]
    pub tau_g: f64,
    #[serde(default = "default_tau_v")]
    pub tau_v: f64,
}

fn default_depth() -> usize {
    2
}
fn default_tau_g() -> f64 {
    1.0
}
fn default_tau_v() -> f64 {
    10.0
}

impl Default for AnsatzConfig {
    fn default() -> Self {
        Self {
            depth: default_depth(),
            tau_g: default_tau_g(),
            tau_v: default_tau_v(),
        }
    }
}

impl AnsatzConfig {
    /// `d·(τ_g + τ_V)`.
    pub fn total_time(&self) -> f64 {
        self.depth as f64 * (self.tau_g + self.tau_v)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsConfig {
    #[serde(default = "default_instances")]
    pub instances: usize,
    /// Horizon and grid of the Sobolev check.
    #[serde(default = "default_sobolev_time")]
    pub sobolev_time: f64,
    #[serde(default = "default_diag_steps")]
    pub sobolev_steps: usize,
    /// Horizon and grid of the Lipschitz check; the bound is only informative for T ≲ 2.
    #[serde(default = "default_lipschitz_time")]
    pub lipschitz_time: f64,
    #[serde(default = "default_diag_steps")]
    pub lipschitz_steps: usize,
    /// Real and imaginary pulse parts are uniform in `[-pulse_scale, pulse_scale)`.
    #[serde(default = "default_pulse_scale")]
    pub pulse_scale: f64,
}

fn default_instances() -> usize {
    100
}
fn default_sobolev_time() -> f64 {
    10.0
}
fn default_lipschitz_time() -> f64 {
    2.0
}
fn default_diag_steps() -> usize {
    40
}
fn default_pulse_scale() -> f64 {
    1.0
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            instances: default_instances(),
            sobolev_time: default_sobolev_time(),
            sobolev_steps: default_diag_steps(),
            lipschitz_time: default_lipschitz_time(),
            lipschitz_steps: default_diag_steps(),
            pulse_scale: default_pulse_scale(),
        }
    }
}

/// How the `wall_ms` column is filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Timing {
    /// Device time `qe_cumulative · T`; deterministic.
    #[default]
    Modeled,
    /// Host wall-clock time of the simulation.
    Measured,
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}
fn default_threshold() -> f64 {
    CHEMICAL_ACCURACY
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default)]
    pub hamiltonian: Option<HamiltonianSource>,
    /// Hamiltonian files visited in sweep mode.
    #[serde(default)]
    pub sweep_files: Vec<PathBuf>,
    /// Computational-basis string, qubit 0 first.
    pub initial_state: String,
    #[serde(default)]
    pub drift: DriftConfig,
    #[serde(default)]
    pub controls: ControlFamilies,
    #[serde(default)]
    pub vqoc: VqocConfig,
    #[serde(default)]
    pub ansatz: AnsatzConfig,
    #[serde(default)]
    pub spsa: SpsaConfig,
    #[serde(default = "default_shots")]
    pub shots: Shots,
    /// Run seed; optimizer seeds are derived from it.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub timing: Timing,
    #[serde(default = "default_threshold")]
    pub chemical_accuracy: f64,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(skip)]
    lambda_explicit: bool,
}

fn default_shots() -> Shots {
    Shots::Exact
}

/// Command-line overrides applied after parsing.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub shots: Option<Shots>,
    pub output: Option<PathBuf>,
    pub mode: Option<Mode>,
}

fn has_key(value: &Value, path: &[&str]) -> bool {
    let mut v = value;
    for key in path {
        match v.get(key) {
            Some(next) => v = next,
            None => return false,
        }
    }
    true
}

impl ExperimentConfig {
    /// Parses a config document; relative paths resolve against `base_dir`.
    pub fn from_json_str(text: &str, base_dir: &Path) -> Result<Self> {
        let raw: Value = serde_json::from_str(text).map_err(|e| config_error("<root>", e.to_string()))?;
        for (path, reason) in [
            (["spsa", "seed"], "optimizer seeds derive from the top-level `seed`"),
            (["spsa", "shots"], "use the top-level `shots` field"),
        ] {
            if has_key(&raw, &path) {
                return Err(config_error(path.join("."), reason));
            }
        }
        if has_key(&raw, &["vqoc", "initial_pulse", "seed"]) {
            return Err(config_error(
                "vqoc.initial_pulse.seed",
                "optimizer seeds derive from the top-level `seed`",
            ));
        }
        let mut config: ExperimentConfig = serde_path_to_error::deserialize(raw.clone()).map_err(|e| {
            let path = e.path().to_string();
            config_error(path, e.into_inner().to_string())
        })?;
        config.lambda_explicit = has_key(&raw, &["vqoc", "lambda"]);
        if config.mode == Mode::Compare {
            let t = config.ansatz.total_time();
            if has_key(&raw, &["vqoc", "total_time"]) && (config.vqoc.total_time - t).abs() > 1e-12 * t.max(1.0) {
                return Err(config_error(
                    "vqoc.total_time",
                    format!("compare mode requires T = d(τ_g + τ_V) = {t}"),
                ));
            }
            config.vqoc.total_time = t;
        }
        config.resolve_paths(base_dir);
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_error(path))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_json_str(&text, base)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let join = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(HamiltonianSource::File { path }) = &mut self.hamiltonian {
            join(path);
        }
        self.sweep_files.iter_mut().for_each(join);
        join(&mut self.output);
    }

    pub fn apply(&mut self, overrides: &Overrides) -> Result<()> {
        if let Some(seed) = overrides.seed {
            self.seed = seed;
        }
        if let Some(shots) = overrides.shots {
            self.shots = shots;
        }
        if let Some(out) = &overrides.output {
            self.output = out.clone();
        }
        if let Some(mode) = overrides.mode {
            self.mode = mode;
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode.uses_vqoc() && !self.lambda_explicit {
            return Err(config_error("vqoc.lambda", "the regularization weight must be given explicitly"));
        }
        match self.mode {
            Mode::Sweep => {
                if self.sweep_files.is_empty() {
                    return Err(config_error("sweep_files", "sweep mode needs at least one Hamiltonian file"));
                }
            }
            _ => {
                if self.hamiltonian.is_none() {
                    return Err(config_error("hamiltonian", "missing Hamiltonian source"));
                }
            }
        }
        if self.initial_state.is_empty() || !self.initial_state.chars().all(|c| c == '0' || c == '1') {
            return Err(config_error("initial_state", "must be a non-empty string of 0/1"));
        }
        let wrap = |path: &'static str| move |e: vqoc_core::Error| config_error(path, e.to_string());
        self.vqoc.validate().map_err(wrap("vqoc"))?;
        self.spsa.validate().map_err(wrap("spsa"))?;
        self.shots.validate().map_err(wrap("shots"))?;
        if self.ansatz.depth == 0 {
            return Err(config_error("ansatz.depth", "must be at least 1"));
        }
        if !(self.ansatz.tau_g >= 0.0 && self.ansatz.tau_v >= 0.0) {
            return Err(config_error("ansatz", "durations must be non-negative"));
        }
        if !(self.drift.c6 >= 0.0 && self.drift.r > 0.0) {
            return Err(config_error("drift", "need c6 >= 0 and r > 0"));
        }
        if !(self.chemical_accuracy > 0.0) {
            return Err(config_error("chemical_accuracy", "must be positive"));
        }
        let d = &self.diagnostics;
        if !(d.sobolev_time > 0.0 && d.lipschitz_time > 0.0 && d.sobolev_steps > 0 && d.lipschitz_steps > 0) {
            return Err(config_error("diagnostics", "horizons and step counts must be positive"));
        }
        if !(d.pulse_scale >= 0.0) {
            return Err(config_error("diagnostics.pulse_scale", "must be non-negative"));
        }
        if self.mode == Mode::Compare {
            let t = self.ansatz.total_time();
            if (self.vqoc.total_time - t).abs() > 1e-12 * t.max(1.0) {
                return Err(config_error(
                    "vqoc.total_time",
                    format!("compare mode requires T = d(τ_g + τ_V) = {t}"),
                ));
            }
        }
        Ok(())
    }

    /// VQOC settings with the derived seed and shot accounting.
    pub fn vqoc_config(&self) -> VqocConfig {
        let mut c = self.vqoc.clone();
        if let InitialPulse::Random { scale, .. } = c.initial_pulse {
            c.initial_pulse = InitialPulse::Random {
                scale,
                seed: self.seed,
            };
        }
        if let Shots::Sampled(n) = self.shots {
            c.qe_shots = n;
        }
        c
    }

    /// SPSA settings with the derived seed and shot mode.
    pub fn spsa_config(&self) -> SpsaConfig {
        SpsaConfig {
            seed: self.seed,
            shots: self.shots,
            ..self.spsa
        }
    }
}

impl std::str::FromStr for ExperimentConfig {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_json_str(s, Path::new("."))
    }
}
