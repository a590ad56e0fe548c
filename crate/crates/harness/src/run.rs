// SPDX-License-Identifier: Apache-2.0

//! Experiment dispatch and artifact emission.

use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use vqoc_core::hamiltonians::{
    build_control_set, build_drift_vdw, load_molecular, ControlSet, HermitianOperator, MolecularHamiltonian,
};
use vqoc_core::propagate::{propagate, Pulse};
use vqoc_core::qcore::random::random_hermitian;
use vqoc_core::qcore::{PauliWord, StateVector};
use vqoc_core::trace::OptimizationTrace;
use vqoc_core::vqe::{run_vqe, AnsatzSpec};
use vqoc_core::vqoc::run_vqoc;

use crate::bounds::{lipschitz_check, verify_bounds, BoundCheck};
use crate::config::{ExperimentConfig, HamiltonianSource, Mode, Timing};
use crate::error::{config_error, io_error, Result};
use crate::reference::{chemical_accuracy_report, exact_ground, GroundState};

pub const CONVERGENCE_HEADER: [&str; 7] = [
    "iteration",
    "qe_cumulative",
    "energy",
    "energy_error",
    "j2",
    "step_size",
    "wall_ms",
];

pub const CODE_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// A fully assembled problem instance.
#[derive(Debug, Clone)]
pub struct Problem {
    pub label: String,
    pub h_mol: HermitianOperator,
    pub units: Option<String>,
    /// Reference energy declared by the Hamiltonian file, if any.
    pub energy_fci: Option<f64>,
    pub h_d: HermitianOperator,
    pub controls: ControlSet,
    pub psi0: StateVector,
    pub ground: GroundState,
}

impl Problem {
    pub fn num_qubits(&self) -> usize {
        self.h_mol.num_qubits()
    }
}

#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub output_dir: PathBuf,
    /// Convergence CSV of the mode's primary run (landscape or bound table for sweep/diagnostics).
    pub convergence_csv: PathBuf,
    /// Every CSV written, primary first.
    pub csv_files: Vec<PathBuf>,
    pub summary_json: PathBuf,
    pub summary: Value,
}

fn load_source(source: &HamiltonianSource) -> Result<(String, HermitianOperator, Option<String>, Option<f64>)> {
    Ok(match source {
        HamiltonianSource::File { path } => {
            let (h, meta) = load_molecular(path)?;
            (path.display().to_string(), h, meta.units, meta.energy_fci)
        }
        HamiltonianSource::Random { qubits, seed } => {
            if *qubits == 0 || *qubits > vqoc_core::qcore::MAX_QUBITS {
                return Err(config_error("hamiltonian.qubits", format!("{qubits} out of range")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let h = random_hermitian(1 << qubits, &mut rng)?;
            (format!("random(m={qubits}, seed={seed})"), h, Some("rad/ms".to_owned()), None)
        }
        HamiltonianSource::Terms { qubits, terms, units } => {
            let parsed = terms
                .iter()
                .enumerate()
                .map(|(i, (c, w))| {
                    w.parse::<PauliWord>()
                        .map(|w| (*c, w))
                        .map_err(|e| config_error(format!("hamiltonian.terms[{i}]"), e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            let h = MolecularHamiltonian::from_terms(*qubits, parsed)?.operator()?;
            ("inline terms".to_owned(), h, units.clone(), None)
        }
    })
}

/// Loads the Hamiltonian and builds drift, controls, initial state and reference.
pub fn build_problem(config: &ExperimentConfig, source: &HamiltonianSource) -> Result<Problem> {
    let (label, h_mol, units, energy_fci) = load_source(source)?;
    let m = h_mol.num_qubits();
    if config.initial_state.len() != m {
        return Err(config_error(
            "initial_state",
            format!("{} bits given for a {m}-qubit Hamiltonian", config.initial_state.len()),
        ));
    }
    let psi0 = StateVector::from_bitstring(&config.initial_state)?;
    let h_d = build_drift_vdw(&config.drift.spec(m)?)?;
    let controls = build_control_set(m, config.controls, config.drift.r)?;
    let ground = exact_ground(&h_mol);
    Ok(Problem {
        label,
        h_mol,
        units,
        energy_fci,
        h_d,
        controls,
        psi0,
        ground,
    })
}

/// Number formatting shared by all CSVs: shortest round-trip representation.
fn num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn wall_ms(timing: Timing, trace: &OptimizationTrace, k: usize) -> f64 {
    let r = &trace.records[k];
    match timing {
        Timing::Modeled => r.qe_cumulative as f64 * trace.total_time,
        Timing::Measured => r.elapsed_ms,
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_error(dir))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(io_error(path))?;
    Ok(csv::Writer::from_writer(file))
}

pub fn write_convergence_csv(path: &Path, trace: &OptimizationTrace, e0: f64, timing: Timing) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(CONVERGENCE_HEADER)?;
    for (k, r) in trace.records.iter().enumerate() {
        w.write_record([
            r.iteration.to_string(),
            r.qe_cumulative.to_string(),
            num(r.j1),
            num(r.j1 - e0),
            num(r.j2),
            num(r.step_size),
            num(wall_ms(timing, trace, k)),
        ])?;
    }
    w.flush().map_err(io_error(path))?;
    Ok(())
}

fn write_compare_csv(path: &Path, runs: [(&str, &OptimizationTrace); 2], e0: f64, timing: Timing) -> Result<()> {
    let mut rows: Vec<(u64, &str, usize)> = runs
        .iter()
        .flat_map(|(name, trace)| (0..trace.records.len()).map(move |k| (trace.records[k].qe_cumulative, *name, k)))
        .collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(b.1)).then(a.2.cmp(&b.2)));
    let mut w = csv_writer(path)?;
    w.write_record(["qe_cumulative", "algorithm", "iteration", "energy", "energy_error", "wall_ms"])?;
    for (qe, name, k) in rows {
        let trace = if name == runs[0].0 { runs[0].1 } else { runs[1].1 };
        let r = &trace.records[k];
        w.write_record([
            qe.to_string(),
            name.to_owned(),
            r.iteration.to_string(),
            num(r.j1),
            num(r.j1 - e0),
            num(wall_ms(timing, trace, k)),
        ])?;
    }
    w.flush().map_err(io_error(path))?;
    Ok(())
}

fn trace_summary(trace: &OptimizationTrace, problem: &Problem, config: &ExperimentConfig) -> Value {
    json!({
        "final_energy": trace.final_energy,
        "best_energy": trace.best_energy,
        "gap": trace.final_energy - problem.ground.energy,
        "iterations": trace.iterations(),
        "termination": trace.termination,
        "total_time_ms": trace.total_time,
        "qe_per_update": trace.qe.per_update,
        "qe_total": trace.qe.total,
        "accuracy": chemical_accuracy_report(
            trace,
            problem.ground.energy,
            config.chemical_accuracy,
            problem.units.as_deref(),
        ),
    })
}

fn reference_summary(problem: &Problem) -> Value {
    json!({
        "label": problem.label,
        "qubits": problem.num_qubits(),
        "energy": problem.ground.energy,
        "residual": problem.ground.residual,
        "energy_fci_file": problem.energy_fci,
        "units": problem.units,
    })
}

fn provenance(config: &ExperimentConfig) -> Value {
    let ham_seed = match &config.hamiltonian {
        Some(HamiltonianSource::Random { seed, .. }) => Some(*seed),
        _ => None,
    };
    json!({
        "code_version": CODE_VERSION,
        "seeds": { "run": config.seed, "hamiltonian": ham_seed },
        "config": config,
    })
}

fn write_summary(path: &Path, summary: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(summary)?;
    text.push('\n');
    fs::write(path, text).map_err(io_error(path))
}

fn run_vqoc_problem(config: &ExperimentConfig, problem: &Problem) -> Result<OptimizationTrace> {
    Ok(run_vqoc(
        &problem.h_d,
        &problem.controls,
        &problem.h_mol,
        &problem.psi0,
        &config.vqoc_config(),
    )?)
}

fn run_vqe_problem(config: &ExperimentConfig, problem: &Problem) -> Result<OptimizationTrace> {
    let a = &config.ansatz;
    let spec = AnsatzSpec::new(&problem.h_d, a.depth, a.tau_v, a.tau_g)?;
    Ok(run_vqe(&problem.h_mol, &spec, &problem.psi0, &config.spsa_config())?)
}

/// Runs the configured experiment and writes its artifacts to `config.output`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunArtifacts> {
    config.validate()?;
    let out = config.output.clone();
    create_dir(&out)?;
    let mut summary = json!({
        "mode": config.mode,
        "provenance": provenance(config),
    });
    let mut csv_files = Vec::new();
    match config.mode {
        Mode::Vqoc | Mode::Vqe => {
            let problem = build_problem(config, config.hamiltonian.as_ref().expect("validated"))?;
            let (name, trace) = if config.mode == Mode::Vqoc {
                ("vqoc", run_vqoc_problem(config, &problem)?)
            } else {
                ("vqe", run_vqe_problem(config, &problem)?)
            };
            let path = out.join("convergence.csv");
            write_convergence_csv(&path, &trace, problem.ground.energy, config.timing)?;
            csv_files.push(path);
            summary["reference"] = reference_summary(&problem);
            summary[name] = trace_summary(&trace, &problem, config);
        }
        Mode::Compare => {
            let problem = build_problem(config, config.hamiltonian.as_ref().expect("validated"))?;
            let (vqoc, vqe) = rayon::join(|| run_vqoc_problem(config, &problem), || run_vqe_problem(config, &problem));
            let (vqoc, vqe) = (vqoc?, vqe?);
            let e0 = problem.ground.energy;
            let joint = out.join("compare.csv");
            write_compare_csv(&joint, [("vqe", &vqe), ("vqoc", &vqoc)], e0, config.timing)?;
            let p_vqoc = out.join("vqoc.csv");
            let p_vqe = out.join("vqe.csv");
            write_convergence_csv(&p_vqoc, &vqoc, e0, config.timing)?;
            write_convergence_csv(&p_vqe, &vqe, e0, config.timing)?;
            csv_files.extend([joint, p_vqoc, p_vqe]);
            summary["reference"] = reference_summary(&problem);
            summary["vqoc"] = trace_summary(&vqoc, &problem, config);
            summary["vqe"] = trace_summary(&vqe, &problem, config);
            let k_l_n: u64 = vqoc.qe.per_update / (2 * vqoc.qe.shots_per_evaluation);
            summary["comparison"] = json!({
                "total_time_vqoc_ms": vqoc.total_time,
                "total_time_vqe_ms": vqe.total_time,
                "qe_ratio_per_update": vqoc.qe.per_update as f64 / vqe.qe.per_update as f64,
                "k_l_n": k_l_n,
            });
        }
        Mode::Sweep => {
            let rows = run_sweep(config, &out)?;
            let landscape = out.join("landscape.csv");
            write_landscape(&landscape, &rows)?;
            csv_files.push(landscape);
            csv_files.extend(rows.iter().map(|r| r.csv.clone()));
            summary["sweep"] = serde_json::to_value(&rows)?;
            summary["variational_ok"] = json!(rows.iter().all(|r| r.variational_ok));
        }
        Mode::Diagnostics => {
            let problem = build_problem(config, config.hamiltonian.as_ref().expect("validated"))?;
            let rows = run_diagnostics(config, &problem)?;
            let path = out.join("bounds.csv");
            write_bounds(&path, &rows)?;
            csv_files.push(path);
            let count = |check: &str| rows.iter().filter(|r| r.check == check).count();
            let violations = |check: &str| rows.iter().filter(|r| r.check == check && !r.result.holds).count();
            summary["reference"] = reference_summary(&problem);
            summary["bounds"] = json!({
                "sobolev": { "instances": count("sobolev"), "violations": violations("sobolev") },
                "lipschitz": {
                    "instances": count("lipschitz"),
                    "violations": violations("lipschitz"),
                    "total_time_ms": config.diagnostics.lipschitz_time,
                },
            });
        }
    }
    let summary_json = out.join("summary.json");
    write_summary(&summary_json, &summary)?;
    Ok(RunArtifacts {
        output_dir: out,
        convergence_csv: csv_files[0].clone(),
        csv_files,
        summary_json,
        summary,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LandscapeRow {
    pub index: usize,
    pub file: String,
    pub qubits: usize,
    pub energy_vqoc: f64,
    pub energy_reference: f64,
    pub energy_error: f64,
    pub energy_fci_file: Option<f64>,
    pub chemical_accuracy: Option<bool>,
    /// `energy_vqoc ≥ e₀ − 1e-9`.
    pub variational_ok: bool,
    pub csv: PathBuf,
}

fn run_sweep(config: &ExperimentConfig, out: &Path) -> Result<Vec<LandscapeRow>> {
    config
        .sweep_files
        .par_iter()
        .enumerate()
        .map(|(index, path)| {
            let problem = build_problem(config, &HamiltonianSource::File { path: path.clone() })?;
            let trace = run_vqoc_problem(config, &problem)?;
            let e0 = problem.ground.energy;
            let csv = out.join(format!("sweep_{index:03}.csv"));
            write_convergence_csv(&csv, &trace, e0, config.timing)?;
            let report = chemical_accuracy_report(&trace, e0, config.chemical_accuracy, problem.units.as_deref());
            Ok(LandscapeRow {
                index,
                file: path.display().to_string(),
                qubits: problem.num_qubits(),
                energy_vqoc: trace.final_energy,
                energy_reference: e0,
                energy_error: report.error,
                energy_fci_file: problem.energy_fci,
                chemical_accuracy: report.attained,
                variational_ok: trace.final_energy >= e0 - 1e-9,
                csv,
            })
        })
        .collect()
}

fn write_landscape(path: &Path, rows: &[LandscapeRow]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "index",
        "file",
        "qubits",
        "energy_vqoc",
        "energy_reference",
        "energy_error",
        "energy_fci_file",
        "chemical_accuracy",
    ])?;
    for r in rows {
        let opt = |x: Option<String>| x.unwrap_or_default();
        w.write_record([
            r.index.to_string(),
            r.file.clone(),
            r.qubits.to_string(),
            num(r.energy_vqoc),
            num(r.energy_reference),
            num(r.energy_error),
            opt(r.energy_fci_file.map(num)),
            opt(r.chemical_accuracy.map(|b| b.to_string())),
        ])?;
    }
    w.flush().map_err(io_error(path))?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct BoundRow {
    pub instance: usize,
    pub check: &'static str,
    pub result: BoundCheck,
}

/// Seeded random pulses on the problem's drift and controls; one Sobolev and one Lipschitz
/// check per instance. Instance `i` draws from stream `i` of the run seed.
pub fn run_diagnostics(config: &ExperimentConfig, problem: &Problem) -> Result<Vec<BoundRow>> {
    let d = config.diagnostics;
    let l = problem.controls.len();
    let per_instance: Vec<Result<[BoundRow; 2]>> = (0..d.instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i as u64);
            let tau_s = d.sobolev_time / d.sobolev_steps as f64;
            let z = Pulse::random(l, d.sobolev_steps, tau_s, d.pulse_scale, &mut rng)?;
            let traj = propagate(&problem.h_d, &problem.controls, &z)?;
            let sob = verify_bounds(&traj, &z, &problem.h_d, &problem.controls, None)?.sobolev;
            let tau_l = d.lipschitz_time / d.lipschitz_steps as f64;
            let a = Pulse::random(l, d.lipschitz_steps, tau_l, d.pulse_scale, &mut rng)?;
            let b = Pulse::random(l, d.lipschitz_steps, tau_l, d.pulse_scale, &mut rng)?;
            let ta = propagate(&problem.h_d, &problem.controls, &a)?;
            let tb = propagate(&problem.h_d, &problem.controls, &b)?;
            let lip = lipschitz_check(&ta, &tb, &problem.controls)?;
            Ok([
                BoundRow {
                    instance: i,
                    check: "sobolev",
                    result: sob,
                },
                BoundRow {
                    instance: i,
                    check: "lipschitz",
                    result: lip,
                },
            ])
        })
        .collect();
    let mut rows = Vec::with_capacity(2 * d.instances);
    for r in per_instance {
        rows.extend(r?);
    }
    Ok(rows)
}

fn write_bounds(path: &Path, rows: &[BoundRow]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["instance", "check", "observed", "bound", "margin", "holds"])?;
    for r in rows {
        w.write_record([
            r.instance.to_string(),
            r.check.to_owned(),
            num(r.result.observed),
            num(r.result.bound),
            num(r.result.margin),
            r.result.holds.to_string(),
        ])?;
    }
    w.flush().map_err(io_error(path))?;
    Ok(())
}
