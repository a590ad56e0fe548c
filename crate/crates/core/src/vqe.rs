// SPDX-License-Identifier: Apache-2.0

//! Gate-based baseline: hardware-efficient ansatz of Z–X–Z rotation blocks
//! interleaved with the drift entangler `exp(−iH_dτ_V)`, optimized by SPSA.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hamiltonians::HermitianOperator;
use crate::qcore::{c, expm_hermitian, kron, ComplexMatrix, StateVector};
use crate::shotsim::{measure_expectation_with, Observable, QeLedger, Shots};
use crate::trace::{IterationRecord, OptimizationTrace};

/// Generator normalization of the single-qubit rotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RotationConvention {
    /// `R_A(θ) = exp(−iθA/2)`.
    HalfAngle,
}

#[derive(Debug, Clone)]
pub struct AnsatzSpec {
    pub m: usize,
    pub d: usize,
    /// Entangler duration τ_V in ms.
    pub tau_v: f64,
    /// Duration of one rotation layer τ_g in ms.
    pub tau_g: f64,
    entangler: ComplexMatrix,
    pub rotation: RotationConvention,
}

impl AnsatzSpec {
    pub fn new(h_d: &HermitianOperator, d: usize, tau_v: f64, tau_g: f64) -> Result<Self> {
        if d == 0 {
            return Err(invalid("d", "depth must be at least 1"));
        }
        if !(tau_v >= 0.0) || !(tau_g >= 0.0) {
            return Err(invalid("tau_v", "durations must be non-negative"));
        }
        Ok(Self {
            m: h_d.num_qubits(),
            d,
            tau_v,
            tau_g,
            entangler: expm_hermitian(h_d, tau_v),
            rotation: RotationConvention::HalfAngle,
        })
    }

    pub fn num_parameters(&self) -> usize {
        3 * self.m * self.d
    }

    pub fn entangler(&self) -> &ComplexMatrix {
        &self.entangler
    }

    /// State-preparation time `d·(τ_g + τ_V)`.
    pub fn total_time(&self) -> f64 {
        self.d as f64 * (self.tau_g + self.tau_v)
    }

    /// Index of angle `r ∈ {0,1,2}` of qubit `q` in block `j` (0-based).
    pub fn parameter_index(&self, j: usize, q: usize, r: usize) -> usize {
        (j * self.m + q) * 3 + r
    }
}

/// `R_Z(θ) = diag(e^{−iθ/2}, e^{iθ/2})`.
pub fn rz(theta: f64) -> ComplexMatrix {
    let h = 0.5 * theta;
    ComplexMatrix::from_diagonal(&[c(h.cos(), -h.sin()), c(h.cos(), h.sin())]).expect("2x2")
}

/// `R_X(θ) = cos(θ/2) I − i sin(θ/2) X`.
pub fn rx(theta: f64) -> ComplexMatrix {
    let (s, co) = (0.5 * theta).sin_cos();
    ComplexMatrix::from_rows(&[vec![c(co, 0.0), c(0.0, -s)], vec![c(0.0, -s), c(co, 0.0)]]).expect("2x2")
}

/// `Z(θ₁) X(θ₂) Z(θ₃)`.
pub fn zxz(t1: f64, t2: f64, t3: f64) -> ComplexMatrix {
    &(&rz(t1) * &rx(t2)) * &rz(t3)
}

/// `U(θ) = Π_{j=d…1} [U_ent · ⊗_q Z(θ₁^{q,j}) X(θ₂^{q,j}) Z(θ₃^{q,j})]`; block 1 acts first.
pub fn ansatz_unitary(spec: &AnsatzSpec, theta: &[f64]) -> Result<ComplexMatrix> {
    if theta.len() != spec.num_parameters() {
        return Err(Error::DimensionMismatch {
            expected: spec.num_parameters(),
            found: theta.len(),
        });
    }
    let mut u = ComplexMatrix::identity(1 << spec.m)?;
    for j in 0..spec.d {
        let mut layer: Option<ComplexMatrix> = None;
        for q in 0..spec.m {
            let i = spec.parameter_index(j, q, 0);
            let r = zxz(theta[i], theta[i + 1], theta[i + 2]);
            layer = Some(match layer {
                None => r,
                Some(acc) => kron(&acc, &r)?,
            });
        }
        let layer = layer.expect("m >= 1");
        u = spec.entangler.matmul(&layer.matmul(&u)?)?;
    }
    Ok(u)
}

/// `E(θ) = ⟨ψ₀|U(θ)† H U(θ)|ψ₀⟩`.
pub fn energy(spec: &AnsatzSpec, h_mol: &HermitianOperator, psi0: &StateVector, theta: &[f64]) -> Result<f64> {
    Ok(prepare(spec, psi0, theta)?.expectation(h_mol.matrix())?.re)
}

fn prepare(spec: &AnsatzSpec, psi0: &StateVector, theta: &[f64]) -> Result<StateVector> {
    psi0.evolve(&ansatz_unitary(spec, theta)?)
}

fn default_a() -> f64 {
    0.2
}
fn default_big_a() -> f64 {
    10.0
}
fn default_s() -> f64 {
    0.602
}
fn default_c() -> f64 {
    0.1
}
fn default_t() -> f64 {
    0.101
}
fn default_iterations() -> usize {
    300
}
fn default_init_scale() -> f64 {
    std::f64::consts::PI
}
fn default_qe_shots() -> u64 {
    1000
}

/// SPSA gains `a_k = a/(k+1+A)^s`, `c_k = c/(k+1)^t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpsaConfig {
    #[serde(default = "default_a")]
    pub a: f64,
    #[serde(default = "default_big_a", rename = "A")]
    pub big_a: f64,
    #[serde(default = "default_s")]
    pub s: f64,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default = "default_t")]
    pub t: f64,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default)]
    pub seed: u64,
    /// Initial angles are uniform in `[-init_scale, init_scale)`; 0 starts from θ = 0.
    #[serde(default = "default_init_scale")]
    pub init_scale: f64,
    /// How the optimizer's two energy evaluations per step are obtained.
    #[serde(default = "default_shots")]
    pub shots: Shots,
    /// Shots per evaluation used for QE accounting in exact mode.
    #[serde(default = "default_qe_shots")]
    pub qe_shots: u64,
}

fn default_shots() -> Shots {
    Shots::Exact
}

impl Default for SpsaConfig {
    fn default() -> Self {
        Self {
            a: default_a(),
            big_a: default_big_a(),
            s: default_s(),
            c: default_c(),
            t: default_t(),
            iterations: default_iterations(),
            seed: 0,
            init_scale: default_init_scale(),
            shots: Shots::Exact,
            qe_shots: default_qe_shots(),
        }
    }
}

impl SpsaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.a >= 0.0) {
            return Err(invalid("spsa.a", "must be non-negative"));
        }
        if !(self.c > 0.0) {
            return Err(invalid("spsa.c", "must be positive"));
        }
        if !(self.big_a >= 0.0) || !self.s.is_finite() || !self.t.is_finite() {
            return Err(invalid("spsa.A", "gain constants must be finite and A non-negative"));
        }
        if !(self.init_scale >= 0.0) {
            return Err(invalid("spsa.init_scale", "must be non-negative"));
        }
        if self.qe_shots == 0 {
            return Err(invalid("spsa.qe_shots", "must be positive"));
        }
        Ok(())
    }

    pub fn a_k(&self, k: usize) -> f64 {
        self.a / (k as f64 + 1.0 + self.big_a).powf(self.s)
    }

    pub fn c_k(&self, k: usize) -> f64 {
        self.c / (k as f64 + 1.0).powf(self.t)
    }

    /// Shots per evaluation entering the QE count.
    pub fn accounting_shots(&self) -> u64 {
        self.shots.sampled().unwrap_or(self.qe_shots)
    }
}

#[derive(Debug, Clone)]
pub struct SpsaStep {
    pub theta: Vec<f64>,
    pub gradient: Vec<f64>,
    pub e_plus: f64,
    pub e_minus: f64,
}

/// Two-point estimate `g_i = [E(θ+c_kΔ) − E(θ−c_kΔ)] / (2c_kΔ_i)` with Rademacher Δ.
pub fn spsa_gradient(
    theta: &[f64],
    mut evaluate: impl FnMut(&[f64]) -> Result<f64>,
    c_k: f64,
    rng: &mut impl Rng,
) -> Result<(Vec<f64>, f64, f64)> {
    let delta: Vec<f64> = (0..theta.len())
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect();
    let shifted = |sign: f64| -> Vec<f64> { theta.iter().zip(&delta).map(|(t, d)| t + sign * c_k * d).collect() };
    let e_plus = evaluate(&shifted(1.0))?;
    let e_minus = evaluate(&shifted(-1.0))?;
    let diff = e_plus - e_minus;
    let g = delta.iter().map(|d| diff / (2.0 * c_k * d)).collect();
    Ok((g, e_plus, e_minus))
}

/// One SPSA update `θ − a_k·g`; consumes exactly two evaluations.
pub fn spsa_step(
    theta: &[f64],
    evaluate: impl FnMut(&[f64]) -> Result<f64>,
    config: &SpsaConfig,
    k: usize,
    rng: &mut impl Rng,
) -> Result<SpsaStep> {
    let (gradient, e_plus, e_minus) = spsa_gradient(theta, evaluate, config.c_k(k), rng)?;
    let a_k = config.a_k(k);
    let theta = theta.iter().zip(&gradient).map(|(t, g)| t - a_k * g).collect();
    Ok(SpsaStep {
        theta,
        gradient,
        e_plus,
        e_minus,
    })
}

/// Runs SPSA on `E(θ)` and records the exact energy of every iterate.
pub fn run_vqe(
    h_mol: &HermitianOperator,
    spec: &AnsatzSpec,
    psi0: &StateVector,
    config: &SpsaConfig,
) -> Result<OptimizationTrace> {
    config.validate()?;
    let start = std::time::Instant::now();
    if h_mol.num_qubits() != spec.m || psi0.num_qubits() != spec.m {
        return Err(Error::DimensionMismatch {
            expected: 1 << spec.m,
            found: h_mol.dim().max(psi0.dim()),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut theta: Vec<f64> = (0..spec.num_parameters())
        .map(|_| {
            if config.init_scale > 0.0 {
                rng.random_range(-config.init_scale..config.init_scale)
            } else {
                0.0
            }
        })
        .collect();
    let observable = match config.shots {
        Shots::Exact => None,
        Shots::Sampled(_) => Some(Observable::new(h_mol.clone())),
    };
    // Shot noise uses its own stream so exact and sampled runs share perturbation sequences.
    let mut shot_rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5348_4f54_5300_0000);

    let e0 = energy(spec, h_mol, psi0, &theta)?;
    let mut trace = OptimizationTrace::new(
        IterationRecord {
            iteration: 0,
            j1: e0,
            j2: 0.0,
            total: e0,
            step_size: 0.0,
            gradient_norm: f64::NAN,
            qe_cumulative: 0,
            elapsed_ms: 0.0,
        },
        spec.total_time(),
        QeLedger::vqe(config.accounting_shots()),
    );
    for k in 0..config.iterations {
        let evaluate = |t: &[f64]| -> Result<f64> {
            match &observable {
                None => energy(spec, h_mol, psi0, t),
                Some(obs) => measure_expectation_with(&prepare(spec, psi0, t)?, obs, config.shots, &mut shot_rng),
            }
        };
        let step = spsa_step(&theta, evaluate, config, k, &mut rng)?;
        theta = step.theta;
        let qe_cumulative = trace.qe.record_update();
        let e = energy(spec, h_mol, psi0, &theta)?;
        trace.push(IterationRecord {
            iteration: k + 1,
            j1: e,
            j2: 0.0,
            total: e,
            step_size: config.a_k(k),
            gradient_norm: step.gradient.iter().map(|g| g * g).sum::<f64>().sqrt(),
            qe_cumulative,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }
    trace.final_theta = Some(theta);
    Ok(trace)
}

#[cfg(test)]
mod tests;
