// SPDX-License-Identifier: Apache-2.0

//! Numerical checks of the a-priori Sobolev and Lipschitz estimates for the propagator.

use serde::Serialize;
use vqoc_core::hamiltonians::{ControlSet, HermitianOperator};
use vqoc_core::propagate::{Pulse, Trajectory};

/// Relative slack absorbing rounding in both sides of a check.
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub observed: f64,
    pub bound: f64,
    /// `bound − observed`.
    pub margin: f64,
    pub holds: bool,
}

impl BoundCheck {
    fn new(observed: f64, bound: f64) -> Self {
        Self {
            observed,
            bound,
            margin: bound - observed,
            holds: observed <= bound + BOUND_SLACK * (1.0 + bound.abs()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsDiagnostics {
    pub sobolev: BoundCheck,
    pub lipschitz: Option<BoundCheck>,
}

/// `Σ_n τ(‖U(t_n)‖_F² + ‖(U(t_{n+1}) − U(t_n))/τ‖_F²)`.
pub fn sobolev_proxy(traj: &Trajectory) -> f64 {
    let tau = traj.pulse().tau();
    let u = traj.unitaries();
    (0..traj.num_steps())
        .map(|n| {
            let diff = &u[n + 1] - &u[n];
            let d = diff.frobenius_norm() / tau;
            tau * (u[n].frobenius_norm().powi(2) + d * d)
        })
        .sum()
}

/// `2^m (T + 2T‖H_d‖_F² + 8 Q_max² ‖z‖_Z²)`.
pub fn sobolev_bound(pulse: &Pulse, h_d: &HermitianOperator, controls: &ControlSet) -> f64 {
    let t = pulse.total_time();
    let dim = h_d.dim() as f64;
    let hd = h_d.matrix().frobenius_norm();
    let q = controls.q_max();
    dim * (t + 2.0 * t * hd * hd + 8.0 * q * q * pulse.z_norm_sq())
}

/// `sup_n ‖U_z(t_n) − U_w(t_n)‖_F` against `2√T Q_max e^{H_max T} ‖z − w‖_Z`,
/// with `H_max` the larger Frobenius norm of `H[z_n]`, `H[w_n]` over both grids.
pub fn lipschitz_check(traj_z: &Trajectory, traj_w: &Trajectory, controls: &ControlSet) -> vqoc_core::Result<BoundCheck> {
    let (z, w) = (traj_z.pulse(), traj_w.pulse());
    z.check_shape(w)?;
    let observed = traj_z
        .unitaries()
        .iter()
        .zip(traj_w.unitaries())
        .map(|(a, b)| (a - b).frobenius_norm())
        .fold(0.0, f64::max);
    let t = z.total_time();
    let h_max = traj_z.h_max().max(traj_w.h_max());
    let dist = z.axpy(-1.0, w)?.z_norm_sq().sqrt();
    let bound = if dist == 0.0 {
        0.0
    } else {
        2.0 * t.sqrt() * controls.q_max() * (h_max * t).exp() * dist
    };
    Ok(BoundCheck::new(observed, bound))
}

/// Sobolev check for `traj`, plus the Lipschitz check when a second trajectory is given.
pub fn verify_bounds(
    traj: &Trajectory,
    pulse: &Pulse,
    h_d: &HermitianOperator,
    controls: &ControlSet,
    pair: Option<&Trajectory>,
) -> vqoc_core::Result<BoundsDiagnostics> {
    traj.pulse().check_shape(pulse)?;
    let sobolev = BoundCheck::new(sobolev_proxy(traj), sobolev_bound(pulse, h_d, controls));
    let lipschitz = pair.map(|other| lipschitz_check(traj, other, controls)).transpose()?;
    Ok(BoundsDiagnostics { sobolev, lipschitz })
}
