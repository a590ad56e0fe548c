// SPDX-License-Identifier: Apache-2.0

mod common;

use serde_json::json;
use vqoc_core::shotsim::Shots;
use vqoc_core::vqoc::InitialPulse;
use vqoc_harness::config::{HamiltonianSource, Timing};
use vqoc_harness::{HarnessError, Mode, Overrides};

fn field_of(err: HarnessError) -> String {
    match err {
        HarnessError::Config { path, .. } => path,
        other => panic!("expected config error, got {other}"),
    }
}

#[test]
fn defaults_fill_in() {
    let dir = tempfile::tempdir().unwrap();
    let c = common::parse(common::z_vqoc(3), dir.path()).unwrap();
    assert_eq!(c.mode, Mode::Vqoc);
    assert_eq!(c.shots, Shots::Exact);
    assert_eq!(c.timing, Timing::Modeled);
    assert_eq!(c.ansatz.total_time(), 22.0);
    assert_eq!(c.chemical_accuracy, 1.6e-3);
    assert_eq!(c.output, dir.path().join("out"));
    assert_eq!(c.spsa.a, 0.2);
    assert_eq!(c.spsa.big_a, 10.0);
}

#[test]
fn unknown_keys_report_field_path() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = common::z_vqoc(3);
    v["vqoc"]["armijo"] = json!({ "rho": 0.5, "bogus": 1 });
    let path = field_of(common::parse(v, dir.path()).unwrap_err());
    assert!(path.starts_with("vqoc.armijo"), "{path}");

    let mut v = common::z_vqoc(3);
    v["extra"] = json!(true);
    assert!(common::parse(v, dir.path()).is_err());
}

#[test]
fn lambda_is_mandatory_for_pulse_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = common::z_vqoc(3);
    v["vqoc"].as_object_mut().unwrap().remove("lambda");
    assert_eq!(field_of(common::parse(v.clone(), dir.path()).unwrap_err()), "vqoc.lambda");
    v["mode"] = json!("vqe");
    let mut c = common::parse(v, dir.path()).unwrap();
    let err = c
        .apply(&Overrides {
            mode: Some(Mode::Sweep),
            ..Default::default()
        })
        .unwrap_err();
    assert_eq!(field_of(err), "vqoc.lambda");
}

#[test]
fn compare_mode_aligns_durations() {
    let dir = tempfile::tempdir().unwrap();
    let c = common::parse(common::compare(2), dir.path()).unwrap();
    assert_eq!(c.vqoc.total_time, 22.0);

    let mut v = common::compare(2);
    v["vqoc"]["total_time"] = json!(100.0);
    assert_eq!(field_of(common::parse(v, dir.path()).unwrap_err()), "vqoc.total_time");

    let mut v = common::compare(3);
    v["vqoc"]["total_time"] = json!(33.0);
    assert_eq!(common::parse(v, dir.path()).unwrap().vqoc.total_time, 33.0);
}

#[test]
fn seeds_come_from_the_run_seed() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = common::z_vqoc(3);
    v["spsa"] = json!({ "seed": 3 });
    assert_eq!(field_of(common::parse(v, dir.path()).unwrap_err()), "spsa.seed");

    let mut v = common::z_vqoc(3);
    v["vqoc"]["initial_pulse"]["seed"] = json!(3);
    assert_eq!(field_of(common::parse(v, dir.path()).unwrap_err()), "vqoc.initial_pulse.seed");

    let mut c = common::parse(common::z_vqoc(3), dir.path()).unwrap();
    c.apply(&Overrides {
        seed: Some(77),
        shots: Some(Shots::Sampled(500)),
        ..Default::default()
    })
    .unwrap();
    assert_eq!(c.spsa_config().seed, 77);
    assert_eq!(c.spsa_config().shots, Shots::Sampled(500));
    assert_eq!(c.vqoc_config().qe_shots, 500);
    assert!(matches!(c.vqoc_config().initial_pulse, InitialPulse::Random { seed: 77, .. }));
}

#[test]
fn initial_state_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    for bad in ["", "01a", "2"] {
        let mut v = common::z_vqoc(3);
        v["initial_state"] = json!(bad);
        assert_eq!(field_of(common::parse(v, dir.path()).unwrap_err()), "initial_state");
    }
    let mut v = common::z_vqoc(3);
    v.as_object_mut().unwrap().remove("initial_state");
    assert!(common::parse(v, dir.path()).is_err());
}

#[test]
fn sweep_requires_files_and_resolves_paths() {
    let dir = tempfile::tempdir().unwrap();
    let v = json!({
        "mode": "sweep",
        "initial_state": "01",
        "vqoc": { "lambda": 0.0 }
    });
    assert_eq!(field_of(common::parse(v.clone(), dir.path()).unwrap_err()), "sweep_files");
    let mut v = v;
    v["sweep_files"] = json!(["a.ham", "/abs/b.ham"]);
    let c = common::parse(v, dir.path()).unwrap();
    assert_eq!(c.sweep_files[0], dir.path().join("a.ham"));
    assert_eq!(c.sweep_files[1], std::path::PathBuf::from("/abs/b.ham"));
}

#[test]
fn hamiltonian_sources_parse() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = common::z_vqoc(3);
    v["hamiltonian"] = json!({ "kind": "random", "qubits": 2, "seed": 9 });
    let c = common::parse(v, dir.path()).unwrap();
    assert_eq!(c.hamiltonian, Some(HamiltonianSource::Random { qubits: 2, seed: 9 }));

    let mut v = common::z_vqoc(3);
    v["hamiltonian"] = json!({ "kind": "nope" });
    assert!(common::parse(v, dir.path()).is_err());
}

#[test]
fn invalid_numbers_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = common::z_vqoc(3);
    v["vqoc"]["z_max"] = json!(-1.0);
    assert_eq!(field_of(common::parse(v, dir.path()).unwrap_err()), "vqoc");
    let mut v = common::z_vqoc(3);
    v["shots"] = json!(0);
    assert!(common::parse(v, dir.path()).is_err());
    let mut v = common::z_vqoc(3);
    v["shots"] = json!(250);
    assert_eq!(common::parse(v, dir.path()).unwrap().shots, Shots::Sampled(250));
    let mut v = common::z_vqoc(3);
    v["shots"] = json!("exact");
    assert_eq!(common::parse(v, dir.path()).unwrap().shots, Shots::Exact);
    let mut v = common::z_vqoc(3);
    v["ansatz"] = json!({ "depth": 0 });
    assert_eq!(field_of(common::parse(v, dir.path()).unwrap_err()), "ansatz.depth");
}
