// SPDX-License-Identifier: Apache-2.0

//! Piecewise-constant propagation `U(t_{n+1}) = exp(−iτH[z_n]) U(t_n)`, the
//! evolution operator `Γ(t_n, t_k)`, the closed-form adjoint state and the
//! cost functional.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hamiltonians::{assemble, ControlSet, HermitianOperator};
use crate::qcore::{expm_hermitian, ComplexMatrix, StateVector, C_ZERO};

/// Imaginary part of `⟨ψ(T)|H|ψ(T)⟩` above which `cost` reports an error.
pub const ENERGY_IMAG_TOL: f64 = 1e-10;

/// An L×N grid of complex amplitudes with step length `tau`; `z_{l,n}` applies on `[t_n, t_{n+1})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pulse {
    l: usize,
    n: usize,
    tau: f64,
    values: Vec<Complex64>,
}

impl Pulse {
    pub fn zeros(l: usize, n: usize, tau: f64) -> Result<Self> {
        Self::constant(l, n, tau, C_ZERO)
    }

    pub fn constant(l: usize, n: usize, tau: f64, value: Complex64) -> Result<Self> {
        Self::from_values(l, n, tau, vec![value; l * n])
    }

    /// `values` is l-major: entry `(l, n)` lives at `l * n_steps + n`.
    pub fn from_values(l: usize, n: usize, tau: f64, values: Vec<Complex64>) -> Result<Self> {
        if l == 0 || n == 0 {
            return Err(invalid("pulse", "need at least one control and one step"));
        }
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(invalid("tau", "step length must be positive"));
        }
        if values.len() != l * n {
            return Err(Error::DimensionMismatch {
                expected: l * n,
                found: values.len(),
            });
        }
        Ok(Self { l, n, tau, values })
    }

    /// Pulse with total time `t_total` split into `n` equal steps.
    pub fn zeros_for_time(l: usize, n: usize, t_total: f64) -> Result<Self> {
        Self::zeros(l, n, t_total / n as f64)
    }

    /// Entries with independent uniformly distributed real and imaginary parts in `[-scale, scale)`.
    pub fn random(l: usize, n: usize, tau: f64, scale: f64, rng: &mut impl Rng) -> Result<Self> {
        let values = (0..l * n)
            .map(|_| {
                if scale > 0.0 {
                    Complex64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale))
                } else {
                    C_ZERO
                }
            })
            .collect();
        Self::from_values(l, n, tau, values)
    }

    #[inline]
    pub fn num_controls(&self) -> usize {
        self.l
    }

    #[inline]
    pub fn num_steps(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn total_time(&self) -> f64 {
        self.tau * self.n as f64
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    #[inline]
    pub fn get(&self, l: usize, n: usize) -> Complex64 {
        self.values[l * self.n + n]
    }

    #[inline]
    pub fn set(&mut self, l: usize, n: usize, value: Complex64) {
        self.values[l * self.n + n] = value;
    }

    /// The amplitudes `z_{·,n}` of step `n`.
    pub fn column(&self, n: usize) -> Vec<Complex64> {
        (0..self.l).map(|l| self.get(l, n)).collect()
    }

    /// `Σ_l |z_{l,n}|`.
    pub fn column_l1(&self, n: usize) -> f64 {
        (0..self.l).map(|l| self.get(l, n).norm()).sum()
    }

    /// `max_n Σ_l |z_{l,n}|`.
    pub fn sup_l1(&self) -> f64 {
        (0..self.n).map(|n| self.column_l1(n)).fold(0.0, f64::max)
    }

    /// Discrete Z inner product `τ Σ Re(a b̄)`.
    pub fn z_inner(&self, other: &Pulse) -> Result<f64> {
        self.check_shape(other)?;
        Ok(self.tau
            * self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (a * b.conj()).re)
                .sum::<f64>())
    }

    /// `‖z‖²_Z = τ Σ |z|²`.
    pub fn z_norm_sq(&self) -> f64 {
        self.tau * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }

    pub fn scaled(&self, s: f64) -> Pulse {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// `self + alpha * d`.
    pub fn axpy(&self, alpha: f64, d: &Pulse) -> Result<Pulse> {
        self.check_shape(d)?;
        let mut out = self.clone();
        for (o, di) in out.values.iter_mut().zip(&d.values) {
            *o += di * alpha;
        }
        Ok(out)
    }

    pub fn check_shape(&self, other: &Pulse) -> Result<()> {
        if self.l != other.l || self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.l * self.n,
                found: other.l * other.n,
            });
        }
        Ok(())
    }
}

/// Propagators `U(t_0) = I, …, U(t_N)` for one pulse, with the per-step exponentials cached.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pulse: Pulse,
    unitaries: Vec<ComplexMatrix>,
    steps: Vec<ComplexMatrix>,
    h_max: f64,
}

impl Trajectory {
    pub fn pulse(&self) -> &Pulse {
        &self.pulse
    }

    pub fn num_steps(&self) -> usize {
        self.steps.len()
    }

    pub fn dim(&self) -> usize {
        self.unitaries[0].dim()
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    /// `U(t_n)`.
    pub fn unitary(&self, n: usize) -> Result<&ComplexMatrix> {
        self.unitaries.get(n).ok_or(Error::IndexOutOfRange {
            index: n,
            len: self.unitaries.len(),
        })
    }

    /// `exp(−iτH[z_n])`.
    pub fn step(&self, n: usize) -> Result<&ComplexMatrix> {
        self.steps.get(n).ok_or(Error::IndexOutOfRange {
            index: n,
            len: self.steps.len(),
        })
    }

    pub fn final_unitary(&self) -> &ComplexMatrix {
        self.unitaries.last().expect("trajectory holds at least U(t_0)")
    }

    /// `max_n ‖H[z_n]‖_F` over the steps.
    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    /// `ψ(t_n) = U(t_n) ψ₀` for n = 0…N.
    pub fn states(&self, psi0: &StateVector) -> Result<Vec<Vec<Complex64>>> {
        self.check_state(psi0)?;
        Ok(self
            .unitaries
            .iter()
            .map(|u| u.apply_unchecked(psi0.amplitudes()))
            .collect())
    }

    pub fn final_state(&self, psi0: &StateVector) -> Result<Vec<Complex64>> {
        self.check_state(psi0)?;
        Ok(self.final_unitary().apply_unchecked(psi0.amplitudes()))
    }

    /// `v_n = U(t_n) U(t_N)† H ψ(T)` for n = 0…N, by backward recursion `v_n = S_n† v_{n+1}`.
    pub fn backward_states(
        &self,
        h_mol: &HermitianOperator,
        psi0: &StateVector,
    ) -> Result<Vec<Vec<Complex64>>> {
        self.check_state(psi0)?;
        self.check_operator(h_mol)?;
        let psi_t = self.final_state(psi0)?;
        let n_steps = self.steps.len();
        let mut out = vec![Vec::new(); n_steps + 1];
        out[n_steps] = h_mol.matrix().apply_unchecked(&psi_t);
        for n in (0..n_steps).rev() {
            out[n] = self.steps[n].apply_adjoint_unchecked(&out[n + 1]);
        }
        Ok(out)
    }

    pub(crate) fn check_state(&self, psi0: &StateVector) -> Result<()> {
        if psi0.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi0.dim(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_operator(&self, h: &HermitianOperator) -> Result<()> {
        if h.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: h.dim(),
            });
        }
        Ok(())
    }
}

/// Propagates `pulse` under `H[z] = H_d + Σ_l (Q_l z_l + Q_l† z̄_l)`.
pub fn propagate(h_d: &HermitianOperator, controls: &ControlSet, pulse: &Pulse) -> Result<Trajectory> {
    if pulse.num_controls() != controls.len() {
        return Err(Error::DimensionMismatch {
            expected: controls.len(),
            found: pulse.num_controls(),
        });
    }
    let n_steps = pulse.num_steps();
    let mut unitaries = Vec::with_capacity(n_steps + 1);
    let mut steps = Vec::with_capacity(n_steps);
    unitaries.push(ComplexMatrix::identity(h_d.dim())?);
    let mut h_max: f64 = 0.0;
    for n in 0..n_steps {
        let h = assemble(h_d, controls, &pulse.column(n))?;
        h_max = h_max.max(h.matrix().frobenius_norm());
        let step = expm_hermitian(&h, pulse.tau());
        let next = step.matmul(&unitaries[n])?;
        steps.push(step);
        unitaries.push(next);
    }
    Ok(Trajectory {
        pulse: pulse.clone(),
        unitaries,
        steps,
        h_max,
    })
}

/// `Γ(t_n, t_k) = U(t_n) U(t_k)†`.
pub fn gamma(traj: &Trajectory, n: usize, k: usize) -> Result<ComplexMatrix> {
    let un = traj.unitary(n)?;
    let uk = traj.unitary(k)?;
    un.matmul(&uk.adjoint())
}

/// `P(t_n) = −2i U(t_n) U(t_N)† H_mol |ψ(T)⟩⟨ψ₀|`.
pub fn adjoint_state(
    traj: &Trajectory,
    h_mol: &HermitianOperator,
    psi0: &StateVector,
    n: usize,
) -> Result<ComplexMatrix> {
    traj.check_state(psi0)?;
    traj.check_operator(h_mol)?;
    let un = traj.unitary(n)?;
    let psi_t = traj.final_state(psi0)?;
    let h_psi = h_mol.matrix().apply_unchecked(&psi_t);
    let back = traj.final_unitary().apply_adjoint_unchecked(&h_psi);
    let v = un.apply_unchecked(&back);
    let scaled: Vec<Complex64> = v.iter().map(|x| x * Complex64::new(0.0, -2.0)).collect();
    ComplexMatrix::outer(&scaled, psi0.amplitudes())
}

/// The two terms of the cost functional `J = J₁ + J₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cost {
    /// `⟨ψ(T)|H_mol|ψ(T)⟩`.
    pub j1: f64,
    /// `(λ/2)‖z‖²_Z`.
    pub j2: f64,
}

impl Cost {
    pub fn total(&self) -> f64 {
        self.j1 + self.j2
    }
}

/// `(λ/2) τ Σ |z|²`.
pub fn regularization(pulse: &Pulse, lambda: f64) -> f64 {
    0.5 * lambda * pulse.z_norm_sq()
}

pub fn cost(
    traj: &Trajectory,
    h_mol: &HermitianOperator,
    psi0: &StateVector,
    pulse: &Pulse,
    lambda: f64,
) -> Result<Cost> {
    if !(lambda >= 0.0) {
        return Err(invalid("lambda", "regularization weight must be non-negative"));
    }
    traj.check_operator(h_mol)?;
    let psi_t = traj.final_state(psi0)?;
    let h_psi = h_mol.matrix().apply_unchecked(&psi_t);
    let e: Complex64 = psi_t.iter().zip(&h_psi).map(|(a, b)| a.conj() * b).sum();
    if e.im.abs() > ENERGY_IMAG_TOL {
        return Err(Error::ComplexEnergy { residual: e.im.abs() });
    }
    Ok(Cost {
        j1: e.re,
        j2: regularization(pulse, lambda),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::{build_control_set, build_drift_vdw, ControlFamilies, DriftSpec};
    use crate::qcore::random::{random_hermitian, random_state};
    use crate::qcore::{c, pauli_z, C_ONE};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_qubit_problem(seed: u64) -> (HermitianOperator, ControlSet, Pulse, HermitianOperator, StateVector) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hd = build_drift_vdw(&DriftSpec::with_interaction(2, 0.1).unwrap()).unwrap();
        let set = build_control_set(2, ControlFamilies::all(), 1.0).unwrap();
        let pulse = Pulse::random(set.len(), 20, 0.05, 1.0, &mut rng).unwrap();
        let h = random_hermitian(4, &mut rng).unwrap();
        let psi = random_state(4, &mut rng).unwrap();
        (hd, set, pulse, h, psi)
    }

    #[test]
    fn zero_everything_is_identity() {
        let hd = HermitianOperator::zeros(4, "0").unwrap();
        let set = build_control_set(2, ControlFamilies::rotational(), 1.0).unwrap();
        let traj = propagate(&hd, &set, &Pulse::zeros(2, 10, 0.1).unwrap()).unwrap();
        let id = ComplexMatrix::identity(4).unwrap();
        assert!(traj.unitaries().iter().all(|u| u == &id));
    }

    #[test]
    fn zero_pulse_is_drift_evolution() {
        let hd = build_drift_vdw(&DriftSpec::with_interaction(3, 0.7).unwrap()).unwrap();
        let set = build_control_set(3, ControlFamilies::all(), 1.0).unwrap();
        let pulse = Pulse::zeros(set.len(), 25, 0.2).unwrap();
        let traj = propagate(&hd, &set, &pulse).unwrap();
        for (n, u) in traj.unitaries().iter().enumerate() {
            let expected = expm_hermitian(&hd, n as f64 * 0.2);
            assert!(u.distance(&expected).unwrap() < 1e-12);
        }
    }

    #[test]
    fn rabi_oscillation() {
        let hd = HermitianOperator::zeros(2, "0").unwrap();
        let set = build_control_set(1, ControlFamilies::rotational(), 1.0).unwrap();
        let omega: f64 = 1.0;
        let pulse = Pulse::constant(1, 100, 0.05, c(omega / 2.0, 0.0)).unwrap();
        let traj = propagate(&hd, &set, &pulse).unwrap();
        for (n, u) in traj.unitaries().iter().enumerate() {
            let t = n as f64 * 0.05;
            let p1 = u[(1, 0)].norm_sqr();
            assert!((p1 - (omega * t / 2.0).sin().powi(2)).abs() < 1e-10);
        }
    }

    #[test]
    fn pulse_shape_errors() {
        let set = build_control_set(2, ControlFamilies::rotational(), 1.0).unwrap();
        let hd = HermitianOperator::zeros(4, "0").unwrap();
        assert!(matches!(
            propagate(&hd, &set, &Pulse::zeros(3, 4, 0.1).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(Pulse::zeros(1, 4, 0.0).is_err());
        assert!(Pulse::from_values(1, 4, 0.1, vec![C_ZERO; 3]).is_err());
    }

    #[test]
    fn gamma_cases() {
        let (hd, set, pulse, _, _) = two_qubit_problem(3);
        let traj = propagate(&hd, &set, &pulse).unwrap();
        let id = ComplexMatrix::identity(4).unwrap();
        assert!(gamma(&traj, 7, 7).unwrap().distance(&id).unwrap() < 1e-12);
        assert!(gamma(&traj, 9, 0).unwrap().distance(traj.unitary(9).unwrap()).unwrap() < 1e-12);
        let composed = gamma(&traj, 18, 11).unwrap().matmul(&gamma(&traj, 11, 2).unwrap()).unwrap();
        assert!(composed.distance(&gamma(&traj, 18, 2).unwrap()).unwrap() < 1e-10);
        assert!(matches!(gamma(&traj, 21, 0), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn adjoint_terminal_condition_and_recursion() {
        for seed in 0..5 {
            let (hd, set, pulse, h, psi) = two_qubit_problem(seed);
            let traj = propagate(&hd, &set, &pulse).unwrap();
            let n_steps = traj.num_steps();
            let psi_t = traj.final_state(&psi).unwrap();
            let terminal = ComplexMatrix::outer(&h.matrix().apply(&psi_t).unwrap(), psi.amplitudes())
                .unwrap()
                .scale(c(0.0, -2.0));
            let p_t = adjoint_state(&traj, &h, &psi, n_steps).unwrap();
            assert!(p_t.distance(&terminal).unwrap() < 1e-12);
            for n in 0..n_steps {
                let p_n = adjoint_state(&traj, &h, &psi, n).unwrap();
                let p_next = adjoint_state(&traj, &h, &psi, n + 1).unwrap();
                let stepped = traj.step(n).unwrap().matmul(&p_n).unwrap();
                assert!(stepped.distance(&p_next).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn adjoint_vanishes_for_zero_observable() {
        let (hd, set, pulse, _, psi) = two_qubit_problem(4);
        let traj = propagate(&hd, &set, &pulse).unwrap();
        let zero = HermitianOperator::zeros(4, "0").unwrap();
        for n in [0, 5, 20] {
            assert_eq!(adjoint_state(&traj, &zero, &psi, n).unwrap().max_abs(), 0.0);
        }
    }

    #[test]
    fn adjoint_is_rank_one() {
        let (hd, set, pulse, h, psi) = two_qubit_problem(5);
        let traj = propagate(&hd, &set, &pulse).unwrap();
        for n in [0, 10, 20] {
            let p = adjoint_state(&traj, &h, &psi, n).unwrap();
            // Every 2×2 minor of a rank-1 matrix vanishes.
            let scale = p.max_abs().powi(2);
            for (i, j, k, l) in [(0, 1, 0, 1), (0, 2, 1, 3), (1, 3, 0, 2), (2, 3, 2, 3)] {
                let minor = p[(i, k)] * p[(j, l)] - p[(i, l)] * p[(j, k)];
                assert!(minor.norm() <= 1e-12 * scale.max(1.0));
            }
        }
    }

    #[test]
    fn stationary_eigenstate_cost() {
        // H_d and H_mol are both diagonal, so |01⟩ is stationary under the zero pulse.
        let hd = build_drift_vdw(&DriftSpec::with_interaction(2, 0.3).unwrap()).unwrap();
        let set = build_control_set(2, ControlFamilies::rotational(), 1.0).unwrap();
        let h = HermitianOperator::new(
            ComplexMatrix::from_diagonal(&[c(0.5, 0.0), c(-1.25, 0.0), c(2.0, 0.0), c(0.0, 0.0)]).unwrap(),
            "H",
        )
        .unwrap();
        let psi = StateVector::from_bitstring("01").unwrap();
        let pulse = Pulse::zeros(2, 30, 0.2).unwrap();
        let traj = propagate(&hd, &set, &pulse).unwrap();
        let j = cost(&traj, &h, &psi, &pulse, 0.0).unwrap();
        assert!((j.j1 + 1.25).abs() < 1e-12);
        assert_eq!(j.j2, 0.0);
    }

    #[test]
    fn regularization_closed_form() {
        let (l, n, tau) = (3, 40, 0.025);
        let value = c(0.3, -0.4);
        let pulse = Pulse::constant(l, n, tau, value).unwrap();
        let expected = tau * n as f64 * l as f64 * value.norm_sqr();
        assert!((regularization(&pulse, 2.0) - expected).abs() < 1e-14);
        assert_eq!(regularization(&pulse, 0.0), 0.0);
    }

    #[test]
    fn cost_rejects_negative_lambda() {
        let hd = HermitianOperator::zeros(2, "0").unwrap();
        let set = build_control_set(1, ControlFamilies::rotational(), 1.0).unwrap();
        let pulse = Pulse::zeros(1, 2, 0.1).unwrap();
        let traj = propagate(&hd, &set, &pulse).unwrap();
        let h = HermitianOperator::new(pauli_z(), "Z").unwrap();
        let psi = StateVector::basis(2, 0).unwrap();
        assert!(cost(&traj, &h, &psi, &pulse, -1.0).is_err());
        assert!((cost(&traj, &h, &psi, &pulse, 0.0).unwrap().j1 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn backward_states_match_closed_form() {
        let (hd, set, pulse, h, psi) = two_qubit_problem(6);
        let traj = propagate(&hd, &set, &pulse).unwrap();
        let v = traj.backward_states(&h, &psi).unwrap();
        for n in [0, 3, 20] {
            let p = adjoint_state(&traj, &h, &psi, n).unwrap();
            // P = −2i v_n ψ₀†, so column k of P is −2i v_n conj(ψ₀_k).
            let k = 0;
            for i in 0..4 {
                let expected = c(0.0, -2.0) * v[n][i] * psi.amplitudes()[k].conj();
                assert!((p[(i, k)] - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn z_inner_matches_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = Pulse::random(3, 7, 0.2, 1.0, &mut rng).unwrap();
        assert!((a.z_inner(&a).unwrap() - a.z_norm_sq()).abs() < 1e-14);
        let b = a.axpy(-1.0, &a).unwrap();
        assert_eq!(b.z_norm_sq(), 0.0);
        let one = Pulse::constant(1, 1, 1.0, C_ONE).unwrap();
        assert!(a.z_inner(&one).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn trajectories_are_unitary(seed in any::<u64>(), m in 1usize..=3, scale in 0.0f64..5.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let hd = build_drift_vdw(&DriftSpec::with_interaction(m, 0.1).unwrap()).unwrap();
            let families = if m >= 2 { ControlFamilies::all() } else { ControlFamilies::rotational() };
            let set = build_control_set(m, families, 1.0).unwrap();
            let pulse = Pulse::random(set.len(), 30, 0.1, scale, &mut rng).unwrap();
            let traj = propagate(&hd, &set, &pulse).unwrap();
            for u in traj.unitaries() {
                prop_assert!(u.unitarity_residual() <= 1e-10);
            }
        }

        #[test]
        fn time_reversed_negated_pulse_returns_to_identity(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let hd = HermitianOperator::zeros(4, "0").unwrap();
            let set = build_control_set(2, ControlFamilies::all(), 1.0).unwrap();
            let n = 15;
            let pulse = Pulse::random(set.len(), n, 0.1, 2.0, &mut rng).unwrap();
            let mut values = Vec::with_capacity(2 * set.len() * n);
            let mut reversed = pulse.clone();
            for l in 0..set.len() {
                for k in 0..n {
                    reversed.set(l, k, -pulse.get(l, n - 1 - k));
                }
            }
            for l in 0..set.len() {
                for k in 0..n {
                    values.push(pulse.get(l, k));
                }
                for k in 0..n {
                    values.push(reversed.get(l, k));
                }
            }
            let round_trip = Pulse::from_values(set.len(), 2 * n, 0.1, values).unwrap();
            let traj = propagate(&hd, &set, &round_trip).unwrap();
            let id = ComplexMatrix::identity(4).unwrap();
            prop_assert!(traj.final_unitary().distance(&id).unwrap() <= 1e-9);
        }

        #[test]
        fn energy_invariant_under_global_phase(seed in any::<u64>(), phase in -10.0f64..10.0) {
            let (hd, set, pulse, h, psi) = two_qubit_problem(seed);
            let traj = propagate(&hd, &set, &pulse).unwrap();
            let a = cost(&traj, &h, &psi, &pulse, 0.1).unwrap();
            let b = cost(&traj, &h, &psi.with_global_phase(phase), &pulse, 0.1).unwrap();
            prop_assert!((a.j1 - b.j1).abs() <= 1e-12);
            prop_assert_eq!(a.j2, b.j2);
        }
    }
}
