// SPDX-License-Identifier: Apache-2.0

//! Adjoint-gradient pulse optimization: gradient `η`, Armijo backtracking,
//! projection onto the admissible set and the outer optimization loop.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hamiltonians::{ControlSet, HermitianOperator};
use crate::propagate::{cost, propagate, Cost, Pulse, Trajectory};
use crate::qcore::{StateVector, C_I};
use crate::shotsim::QeLedger;
use crate::trace::{IterationRecord, OptimizationTrace, Termination};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArmijoParams {
    pub alpha0: f64,
    /// Backtracking factor ρ.
    pub rho: f64,
    /// Sufficient-decrease constant c.
    pub c: f64,
    pub max_backtracks: u32,
}

impl Default for ArmijoParams {
    fn default() -> Self {
        Self {
            alpha0: 1.0,
            rho: 0.5,
            c: 1e-4,
            max_backtracks: 30,
        }
    }
}

impl ArmijoParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha0 > 0.0) {
            return Err(invalid("armijo.alpha0", "must be positive"));
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(invalid("armijo.rho", "must lie in (0, 1)"));
        }
        if !(self.c > 0.0 && self.c < 1.0) {
            return Err(invalid("armijo.c", "must lie in (0, 1)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialPulse {
    Zero,
    Constant { re: f64, im: f64 },
    /// Real and imaginary parts uniform in `[-scale, scale)`.
    Random {
        scale: f64,
        #[serde(default)]
        seed: u64,
    },
}

fn default_lambda() -> f64 {
    0.01
}
fn default_z_max() -> f64 {
    10.0
}
fn default_iterations() -> usize {
    200
}
fn default_total_time() -> f64 {
    100.0
}
fn default_steps() -> usize {
    100
}
fn default_true() -> bool {
    true
}
fn default_gradient_tol() -> f64 {
    1e-10
}
fn default_qe_shots() -> u64 {
    1000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VqocConfig {
    /// Regularization weight λ of `J₂ = (λ/2)‖z‖²_Z`.
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    /// Bound on `Σ_l |z_{l,n}|` per step.
    #[serde(default = "default_z_max")]
    pub z_max: f64,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    /// Pulse duration T in ms.
    #[serde(default = "default_total_time")]
    pub total_time: f64,
    /// Number of piecewise-constant steps N.
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default)]
    pub armijo: ArmijoParams,
    #[serde(default = "InitialPulse::zero")]
    pub initial_pulse: InitialPulse,
    /// Project every iterate onto the admissible set.
    #[serde(default = "default_true")]
    pub project: bool,
    /// Stop once `‖λz + η‖_Z` drops below this.
    #[serde(default = "default_gradient_tol")]
    pub gradient_tol: f64,
    /// Shots per quantum evaluation used for QE accounting.
    #[serde(default = "default_qe_shots")]
    pub qe_shots: u64,
}

impl InitialPulse {
    fn zero() -> Self {
        InitialPulse::Zero
    }

    pub fn build(&self, l: usize, n: usize, tau: f64) -> Result<Pulse> {
        match *self {
            InitialPulse::Zero => Pulse::zeros(l, n, tau),
            InitialPulse::Constant { re, im } => Pulse::constant(l, n, tau, Complex64::new(re, im)),
            InitialPulse::Random { scale, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Pulse::random(l, n, tau, scale, &mut rng)
            }
        }
    }
}

impl Default for VqocConfig {
    fn default() -> Self {
        Self {
            lambda: default_lambda(),
            z_max: default_z_max(),
            iterations: default_iterations(),
            total_time: default_total_time(),
            steps: default_steps(),
            armijo: ArmijoParams::default(),
            initial_pulse: InitialPulse::Zero,
            project: true,
            gradient_tol: default_gradient_tol(),
            qe_shots: default_qe_shots(),
        }
    }
}

impl VqocConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0) {
            return Err(invalid("lambda", "must be non-negative"));
        }
        if !(self.z_max > 0.0) {
            return Err(invalid("z_max", "must be positive"));
        }
        if !(self.total_time > 0.0) || !self.total_time.is_finite() {
            return Err(invalid("total_time", "must be positive"));
        }
        if self.steps == 0 {
            return Err(invalid("steps", "need at least one step"));
        }
        if self.qe_shots == 0 {
            return Err(invalid("qe_shots", "must be positive"));
        }
        self.armijo.validate()
    }

    pub fn tau(&self) -> f64 {
        self.total_time / self.steps as f64
    }
}

/// `η_{l,n} = −Tr[Q_l†(P(t_n)U(t_n)† + U(t_n)P(t_n)†)]` for n = 0…N−1, as an L×N grid.
///
/// With `P(t_n) = −2i v_n ψ₀†` and `v_n = U(t_n)U(t_N)†H ψ(T)` this is
/// `2i(⟨Q_lψ_n|v_n⟩ − ⟨Q_l v_n|ψ_n⟩)`, evaluated without forming P.
pub fn gradient_eta(
    traj: &Trajectory,
    h_mol: &HermitianOperator,
    psi0: &StateVector,
    controls: &ControlSet,
) -> Result<Pulse> {
    let pulse = traj.pulse();
    if pulse.num_controls() != controls.len() {
        return Err(Error::DimensionMismatch {
            expected: controls.len(),
            found: pulse.num_controls(),
        });
    }
    if controls.dim() != traj.dim() {
        return Err(Error::DimensionMismatch {
            expected: traj.dim(),
            found: controls.dim(),
        });
    }
    let psi = traj.states(psi0)?;
    let v = traj.backward_states(h_mol, psi0)?;
    let n_steps = pulse.num_steps();
    let mut eta = Pulse::zeros(controls.len(), n_steps, pulse.tau())?;
    let two_i = C_I * 2.0;
    for (l, op) in controls.operators().iter().enumerate() {
        for n in 0..n_steps {
            let a = op.matrix.apply_unchecked(&psi[n]);
            let b = op.matrix.apply_unchecked(&v[n]);
            let av: Complex64 = a.iter().zip(&v[n]).map(|(x, y)| x.conj() * y).sum();
            let bp: Complex64 = b.iter().zip(&psi[n]).map(|(x, y)| x.conj() * y).sum();
            eta.set(l, n, two_i * (av - bp));
        }
    }
    Ok(eta)
}

/// `λz + η`, the total gradient in Z-units.
pub fn total_gradient(pulse: &Pulse, eta: &Pulse, lambda: f64) -> Result<Pulse> {
    eta.axpy(lambda, pulse)
}

/// Relative slack below which a column counts as inside the ball; makes projection idempotent.
pub const PROJECTION_SLACK: f64 = 1e-12;

/// Scales every column with `Σ_l |z_{l,n}| > z_max` back onto the ball.
pub fn project_admissible(pulse: &Pulse, z_max: f64) -> Pulse {
    let mut out = pulse.clone();
    for n in 0..pulse.num_steps() {
        let s = pulse.column_l1(n);
        if s > z_max * (1.0 + PROJECTION_SLACK) {
            let f = z_max / s;
            for l in 0..pulse.num_controls() {
                out.set(l, n, pulse.get(l, n) * f);
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct ArmijoOutcome<T> {
    pub alpha: f64,
    /// `z + α d` at the returned α.
    pub trial: Pulse,
    pub cost: f64,
    pub stagnated: bool,
    pub evaluations: u32,
    /// Whatever the evaluator produced for the returned trial.
    pub state: T,
}

/// Backtracks `α ∈ {α₀ρ^k}` until `J(z + αd) ≤ J(z) − cα‖d‖²_Z`.
///
/// `evaluate` maps a trial pulse to its cost plus arbitrary state. When no α qualifies the
/// outcome for `α₀ρ^{max}` is returned with `stagnated` set.
pub fn armijo_step<T>(
    current_cost: f64,
    pulse: &Pulse,
    direction: &Pulse,
    mut evaluate: impl FnMut(&Pulse) -> Result<(f64, T)>,
    params: &ArmijoParams,
) -> Result<ArmijoOutcome<T>> {
    params.validate()?;
    let d2 = direction.z_norm_sq();
    let mut alpha = params.alpha0;
    let mut evaluations = 0;
    for k in 0..=params.max_backtracks {
        let trial = pulse.axpy(alpha, direction)?;
        let (value, state) = evaluate(&trial)?;
        evaluations += 1;
        let ok = value <= current_cost - params.c * alpha * d2;
        if ok || k == params.max_backtracks {
            return Ok(ArmijoOutcome {
                alpha,
                trial,
                cost: value,
                stagnated: !ok,
                evaluations,
                state,
            });
        }
        alpha *= params.rho;
    }
    unreachable!("loop returns on the last backtrack")
}

struct Iterate {
    pulse: Pulse,
    traj: Trajectory,
    cost: Cost,
}

fn evaluate(
    pulse: Pulse,
    h_d: &HermitianOperator,
    controls: &ControlSet,
    h_mol: &HermitianOperator,
    psi0: &StateVector,
    lambda: f64,
) -> Result<Iterate> {
    let traj = propagate(h_d, controls, &pulse)?;
    let cost = cost(&traj, h_mol, psi0, &pulse, lambda)?;
    Ok(Iterate { pulse, traj, cost })
}

/// Runs the discrete-pulse optimization loop: propagate, gradient, Armijo update, projection.
pub fn run_vqoc(
    h_d: &HermitianOperator,
    controls: &ControlSet,
    h_mol: &HermitianOperator,
    psi0: &StateVector,
    config: &VqocConfig,
) -> Result<OptimizationTrace> {
    config.validate()?;
    let start = std::time::Instant::now();
    for found in [controls.dim(), h_mol.dim(), psi0.dim()] {
        if found != h_d.dim() {
            return Err(Error::DimensionMismatch {
                expected: h_d.dim(),
                found,
            });
        }
    }
    let mut initial = config.initial_pulse.build(controls.len(), config.steps, config.tau())?;
    if config.project {
        initial = project_admissible(&initial, config.z_max);
    }
    let mut current = evaluate(initial, h_d, controls, h_mol, psi0, config.lambda)?;
    let ledger = QeLedger::for_controls(controls, config.steps as u64, config.qe_shots)?;
    let mut trace = OptimizationTrace::new(
        IterationRecord {
            iteration: 0,
            j1: current.cost.j1,
            j2: current.cost.j2,
            total: current.cost.total(),
            step_size: 0.0,
            gradient_norm: f64::NAN,
            qe_cumulative: 0,
            elapsed_ms: 0.0,
        },
        config.total_time,
        ledger,
    );

    for k in 1..=config.iterations {
        let eta = gradient_eta(&current.traj, h_mol, psi0, controls)?;
        let grad = total_gradient(&current.pulse, &eta, config.lambda)?;
        let gradient_norm = grad.z_norm_sq().sqrt();
        if k == 1 {
            trace.records[0].gradient_norm = gradient_norm;
        }
        if gradient_norm <= config.gradient_tol {
            trace.termination = Termination::Converged;
            break;
        }
        let qe_cumulative = trace.qe.record_update();
        let direction = grad.scaled(-1.0);
        let step = armijo_step(
            current.cost.total(),
            &current.pulse,
            &direction,
            |trial| {
                let candidate = if config.project {
                    project_admissible(trial, config.z_max)
                } else {
                    trial.clone()
                };
                let it = evaluate(candidate, h_d, controls, h_mol, psi0, config.lambda)?;
                Ok((it.cost.total(), it))
            },
            &config.armijo,
        )?;
        if step.stagnated {
            trace.termination = Termination::Stagnated;
            break;
        }
        current = step.state;
        trace.push(IterationRecord {
            iteration: k,
            j1: current.cost.j1,
            j2: current.cost.j2,
            total: current.cost.total(),
            step_size: step.alpha,
            gradient_norm,
            qe_cumulative,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }
    trace.final_pulse = Some(current.pulse);
    Ok(trace)
}
