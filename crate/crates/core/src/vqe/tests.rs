// SPDX-License-Identifier: Apache-2.0

use super::*;
use crate::qcore::random::{random_hermitian, random_state};
use crate::qcore::{pauli_z, HermitianOperator};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn z_operator() -> HermitianOperator {
    HermitianOperator::new(pauli_z(), "Z").unwrap()
}

fn zero_drift(m: usize) -> HermitianOperator {
    HermitianOperator::zeros(1 << m, "H_d").unwrap()
}

#[test]
fn zero_angles_give_entangler_power() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let h_d = random_hermitian(4, &mut rng).unwrap();
    let spec = AnsatzSpec::new(&h_d, 3, 0.7, 1.0).unwrap();
    let u = ansatz_unitary(&spec, &vec![0.0; spec.num_parameters()]).unwrap();
    let e = spec.entangler();
    let expected = e.matmul(&e.matmul(e).unwrap()).unwrap();
    assert!(u.distance(&expected).unwrap() < 1e-12);
}

#[test]
fn single_qubit_rotation_matrices() {
    let u = zxz(0.3, 1.1, -0.4);
    let expected = &(&rz(0.3) * &rx(1.1)) * &rz(-0.4);
    assert!(u.distance(&expected).unwrap() < 1e-15);
    // Rx(π) = −iX, Rz(π) = −iZ
    let x = rx(std::f64::consts::PI);
    assert!((x[(0, 1)] - c(0.0, -1.0)).norm() < 1e-15);
    assert!(x[(0, 0)].norm() < 1e-15);
    let z = rz(std::f64::consts::PI);
    assert!((z[(0, 0)] - c(0.0, -1.0)).norm() < 1e-15);
    assert!((z[(1, 1)] - c(0.0, 1.0)).norm() < 1e-15);
}

#[test]
fn euler_angles_reach_any_single_qubit_state() {
    let spec = AnsatzSpec::new(&zero_drift(1), 1, 0.0, 1.0).unwrap();
    let psi0 = StateVector::basis(2, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let target = random_state(2, &mut rng).unwrap();
        let a = target.amplitudes();
        let beta = 2.0 * a[1].norm().atan2(a[0].norm());
        let phi = a[1].arg() - a[0].arg();
        let theta = [phi + std::f64::consts::FRAC_PI_2, beta, 0.0];
        let psi = psi0.evolve(&ansatz_unitary(&spec, &theta).unwrap()).unwrap();
        assert!((psi.inner(&target).unwrap().norm() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn energy_matches_closed_form_for_z() {
    let spec = AnsatzSpec::new(&zero_drift(1), 1, 0.0, 1.0).unwrap();
    let psi0 = StateVector::basis(2, 0).unwrap();
    for &t2 in &[0.0, 0.4, 1.9, 3.0] {
        let e = energy(&spec, &z_operator(), &psi0, &[0.8, t2, -2.0]).unwrap();
        assert!((e - t2.cos()).abs() < 1e-13);
    }
}

#[test]
fn parameter_count_and_time() {
    let spec = AnsatzSpec::new(&zero_drift(2), 2, 10.0, 1.0).unwrap();
    assert_eq!(spec.num_parameters(), 12);
    assert_eq!(spec.parameter_index(1, 1, 2), 11);
    assert_eq!(spec.total_time(), 22.0);
    assert!(ansatz_unitary(&spec, &[0.0; 11]).is_err());
    assert!(AnsatzSpec::new(&zero_drift(2), 0, 10.0, 1.0).is_err());
}

#[test]
fn zero_gain_leaves_theta_unchanged() {
    let config = SpsaConfig {
        a: 0.0,
        ..SpsaConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let theta = vec![0.3, -1.2, 2.5];
    let mut calls = 0;
    let step = spsa_step(
        &theta,
        |t| {
            calls += 1;
            Ok(t.iter().map(|x| x * x).sum())
        },
        &config,
        4,
        &mut rng,
    )
    .unwrap();
    assert_eq!(step.theta, theta);
    assert_eq!(calls, 2);
}

#[test]
fn gain_sequences() {
    let config = SpsaConfig::default();
    assert!((config.a_k(0) - 0.2 / 11f64.powf(0.602)).abs() < 1e-15);
    assert!((config.c_k(0) - 0.1).abs() < 1e-15);
    assert!((config.c_k(9) - 0.1 / 10f64.powf(0.101)).abs() < 1e-15);
}

#[test]
fn gradient_unbiased_on_linear_energy() {
    let b = [0.7, -1.3, 0.2, 2.0];
    let draws = 4000;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut mean = [0.0; 4];
    for _ in 0..draws {
        let (g, _, _) = spsa_gradient(
            &[0.1, 0.2, 0.3, 0.4],
            |t| Ok(t.iter().zip(&b).map(|(x, y)| x * y).sum()),
            0.05,
            &mut rng,
        )
        .unwrap();
        for i in 0..4 {
            mean[i] += g[i] / draws as f64;
        }
    }
    for i in 0..4 {
        let others: f64 = b.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v * v).sum();
        let sigma = (others / draws as f64).sqrt();
        assert!((mean[i] - b[i]).abs() < 3.0 * sigma, "component {i}: {} vs {}", mean[i], b[i]);
    }
}

#[test]
fn spsa_contracts_quadratic() {
    let target: [f64; 4] = [0.5, -1.0, 2.0, 0.25];
    let theta0 = [2.0, 1.0, -1.0, -2.0];
    let dist0: f64 = theta0.iter().zip(&target).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let config = SpsaConfig::default();
    let runs = 200;
    let mut mean = 0.0;
    for seed in 0..runs {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut theta = theta0.to_vec();
        for k in 0..200 {
            let f = |t: &[f64]| Ok(t.iter().zip(&target).map(|(a, b)| (a - b).powi(2)).sum());
            theta = spsa_step(&theta, f, &config, k, &mut rng).unwrap().theta;
        }
        let dist: f64 = theta.iter().zip(&target).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        mean += dist / runs as f64;
    }
    assert!(mean < dist0 / 10.0, "mean distance {mean} vs initial {dist0}");
}

#[test]
fn qe_accounting_after_five_iterations() {
    let spec = AnsatzSpec::new(&zero_drift(1), 1, 0.0, 1.0).unwrap();
    let config = SpsaConfig {
        iterations: 5,
        ..SpsaConfig::default()
    };
    let psi0 = StateVector::basis(2, 0).unwrap();
    let trace = run_vqe(&z_operator(), &spec, &psi0, &config).unwrap();
    assert_eq!(trace.qe.total, 10_000);
    assert_eq!(trace.records.last().unwrap().qe_cumulative, 10_000);
    assert_eq!(trace.iterations(), 5);
    assert_eq!(trace.final_theta.as_ref().unwrap().len(), 3);
}

#[test]
fn z_ground_state_median_seed() {
    let spec = AnsatzSpec::new(&zero_drift(1), 1, 0.0, 1.0).unwrap();
    let psi0 = StateVector::basis(2, 0).unwrap();
    let mut best: Vec<f64> = (0..10)
        .map(|seed| {
            let config = SpsaConfig {
                seed,
                ..SpsaConfig::default()
            };
            run_vqe(&z_operator(), &spec, &psi0, &config).unwrap().best_energy
        })
        .collect();
    best.sort_by(f64::total_cmp);
    let median = 0.5 * (best[4] + best[5]);
    assert!(median <= -0.99, "best-seen energies {best:?}");
}

#[test]
fn sampled_run_is_seed_deterministic() {
    let spec = AnsatzSpec::new(&zero_drift(1), 1, 0.0, 1.0).unwrap();
    let psi0 = StateVector::basis(2, 0).unwrap();
    let config = SpsaConfig {
        iterations: 20,
        shots: Shots::Sampled(200),
        seed: 9,
        ..SpsaConfig::default()
    };
    let a = run_vqe(&z_operator(), &spec, &psi0, &config).unwrap();
    let b = run_vqe(&z_operator(), &spec, &psi0, &config).unwrap();
    assert_eq!(a.final_theta, b.final_theta);
    assert_eq!(a.qe.total, 20 * 2 * 200);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ansatz_is_unitary(seed in any::<u64>(), d in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h_d = random_hermitian(4, &mut rng).unwrap();
        let spec = AnsatzSpec::new(&h_d, d, 1.3, 1.0).unwrap();
        let theta: Vec<f64> = (0..spec.num_parameters()).map(|_| rng.random_range(-4.0..4.0)).collect();
        prop_assert!(ansatz_unitary(&spec, &theta).unwrap().unitarity_residual() < 1e-10);
    }

    #[test]
    fn angles_are_periodic_up_to_phase(seed in any::<u64>(), idx in 0usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h_d = random_hermitian(4, &mut rng).unwrap();
        let spec = AnsatzSpec::new(&h_d, 2, 0.9, 1.0).unwrap();
        let theta: Vec<f64> = (0..spec.num_parameters()).map(|_| rng.random_range(-4.0..4.0)).collect();
        let mut shifted = theta.clone();
        shifted[idx] += 2.0 * std::f64::consts::PI;
        let psi0 = random_state(4, &mut rng).unwrap();
        let a = psi0.evolve(&ansatz_unitary(&spec, &theta).unwrap()).unwrap();
        let b = psi0.evolve(&ansatz_unitary(&spec, &shifted).unwrap()).unwrap();
        prop_assert!((a.inner(&b).unwrap().norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn energy_is_variational(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(4, &mut rng).unwrap();
        let h_d = random_hermitian(4, &mut rng).unwrap();
        let spec = AnsatzSpec::new(&h_d, 2, 0.5, 1.0).unwrap();
        let theta: Vec<f64> = (0..spec.num_parameters()).map(|_| rng.random_range(-4.0..4.0)).collect();
        let psi0 = StateVector::basis(4, 0).unwrap();
        let e = energy(&spec, &h, &psi0, &theta).unwrap();
        let ground = h.eigen().values[0];
        prop_assert!(e >= ground - 1e-12);
    }
}
