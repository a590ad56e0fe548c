// SPDX-License-Identifier: Apache-2.0

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vqoc_core::hamiltonians::{build_control_set, build_drift_vdw, ControlFamilies, DriftSpec, HermitianOperator};
use vqoc_core::qcore::random::random_hermitian;
use vqoc_core::qcore::{pauli_z, StateVector};
use vqoc_core::shotsim::{qe_count, QeKind};
use vqoc_core::vqe::{run_vqe, AnsatzSpec, SpsaConfig};
use vqoc_core::vqoc::{run_vqoc, VqocConfig};

/// Lowest basis-state energy, an upper bound on the ground energy.
fn basis_min(h: &HermitianOperator) -> f64 {
    (0..h.dim()).map(|i| h.matrix()[(i, i)].re).fold(f64::INFINITY, f64::min)
}

#[test]
fn vqoc_descends_below_every_basis_energy() {
    let h_d = build_drift_vdw(&DriftSpec::with_interaction(2, 0.1).unwrap()).unwrap();
    let controls = build_control_set(2, ControlFamilies::rotational_shared_entanglement(), 1.0).unwrap();
    let psi0 = StateVector::basis(4, 0).unwrap();
    let config = VqocConfig {
        total_time: 100.0,
        steps: 100,
        iterations: 200,
        ..VqocConfig::default()
    };
    for seed in 0..3 {
        let h = random_hermitian(4, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let trace = run_vqoc(&h_d, &controls, &h, &psi0, &config).unwrap();
        assert!(trace.final_energy < basis_min(&h), "seed {seed}: {}", trace.final_energy);
        assert_eq!(trace.records.len(), trace.iterations() + 1);
        let costs: Vec<f64> = trace.records.iter().map(|r| r.total).collect();
        assert!(costs.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }
}

#[test]
fn qe_per_update_matches_trace_increments() {
    let h_d = HermitianOperator::zeros(2, "H_d").unwrap();
    let z = HermitianOperator::new(pauli_z(), "Z").unwrap();
    let psi0 = StateVector::basis(2, 0).unwrap();
    let spec = AnsatzSpec::new(&h_d, 1, 0.0, 1.0).unwrap();
    let spsa = SpsaConfig {
        iterations: 4,
        ..SpsaConfig::default()
    };
    let trace = run_vqe(&z, &spec, &psi0, &spsa).unwrap();
    let per_update = qe_count(QeKind::Vqe { shots: 1000 });
    for w in trace.records.windows(2) {
        assert_eq!(w[1].qe_cumulative - w[0].qe_cumulative, per_update);
    }
}
