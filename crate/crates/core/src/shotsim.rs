// SPDX-License-Identifier: Apache-2.0

//! Shot-level simulation of the ancilla cross-term measurement
//! `Re/Im ⟨ψ|U₁†HU₂|ψ⟩ = ±(p₀Ẽ₀ − p₁Ẽ₁)` and quantum-evaluation accounting.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hamiltonians::{ControlKind, ControlOperator, ControlSet, HermitianOperator};
use crate::propagate::{gamma, Trajectory};
use crate::qcore::{
    decompose_single_qubit, embed_single, pauli_decompose, pauli_x, pauli_z, ComplexMatrix, PauliWord,
    SpectralDecomposition, StateVector, C_I, C_ONE, C_ZERO,
};

/// Residual above which a matrix handed to the estimator is rejected as non-unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// Largest split accepted for a single control operator, shared entanglement excepted.
pub const MAX_SPLIT_TERMS: usize = 4;

/// Exact expectation values or a finite number of measurement shots.
///
/// Serialized as the string `"exact"` or a positive integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ShotsRepr", try_from = "ShotsRepr")]
pub enum Shots {
    Exact,
    Sampled(u64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ShotsRepr {
    Count(u64),
    Word(String),
}

impl From<Shots> for ShotsRepr {
    fn from(s: Shots) -> Self {
        match s {
            Shots::Exact => ShotsRepr::Word("exact".to_owned()),
            Shots::Sampled(n) => ShotsRepr::Count(n),
        }
    }
}

impl TryFrom<ShotsRepr> for Shots {
    type Error = Error;

    fn try_from(r: ShotsRepr) -> Result<Self> {
        match r {
            ShotsRepr::Count(n) => {
                let shots = Shots::Sampled(n);
                shots.validate()?;
                Ok(shots)
            }
            ShotsRepr::Word(w) => w.parse(),
        }
    }
}

impl Shots {
    pub fn sampled(&self) -> Option<u64> {
        match self {
            Shots::Exact => None,
            Shots::Sampled(n) => Some(*n),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if *self == Shots::Sampled(0) {
            return Err(invalid("shots", "sampled mode needs at least one shot"));
        }
        Ok(())
    }
}

impl std::fmt::Display for Shots {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Shots::Exact => f.write_str("exact"),
            Shots::Sampled(n) => write!(f, "{n}"),
        }
    }
}

impl std::str::FromStr for Shots {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("exact") {
            return Ok(Shots::Exact);
        }
        let n: u64 = s
            .parse()
            .map_err(|_| invalid("shots", format!("expected a shot count or `exact`, got {s:?}")))?;
        let shots = Shots::Sampled(n);
        shots.validate()?;
        Ok(shots)
    }
}

/// Which part of the cross term is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
}

/// A Hermitian observable with its eigenbasis cached for shot sampling.
#[derive(Debug, Clone)]
pub struct Observable {
    op: HermitianOperator,
    spectrum: SpectralDecomposition,
}

impl Observable {
    pub fn new(op: HermitianOperator) -> Self {
        let spectrum = op.eigen();
        Self { op, spectrum }
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// `Γ† H Γ` for unitary `Γ`; the eigenbasis is rotated rather than recomputed.
    pub fn conjugated_by(&self, g: &ComplexMatrix) -> Result<Observable> {
        let ga = g.adjoint();
        let m = ga.matmul(self.op.matrix())?.matmul(g)?;
        let matrix = symmetrize(&m);
        let vectors = ga.matmul(&self.spectrum.vectors)?;
        Ok(Observable {
            op: HermitianOperator::new(matrix, format!("{}'", self.op.label()))?,
            spectrum: SpectralDecomposition {
                values: self.spectrum.values.clone(),
                vectors,
            },
        })
    }

    fn expectation_unnormalized(&self, v: &[Complex64]) -> f64 {
        let hv = self.op.matrix().apply_unchecked(v);
        v.iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// Sum of `shots` eigenvalue outcomes drawn with Born probabilities of the normalized `v`.
    fn sample_sum(&self, v: &[Complex64], shots: u64, rng: &mut impl Rng) -> f64 {
        let dim = self.dim();
        let vecs = &self.spectrum.vectors;
        let mut probs: Vec<f64> = (0..dim)
            .map(|k| {
                let overlap: Complex64 = (0..dim).map(|i| vecs[(i, k)].conj() * v[i]).sum();
                overlap.norm_sqr()
            })
            .collect();
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
        let mut remaining = shots;
        let mut mass = 1.0;
        let mut sum = 0.0;
        for (k, &p) in probs.iter().enumerate() {
            if remaining == 0 {
                break;
            }
            let count = if k + 1 == dim {
                remaining
            } else {
                binomial(remaining, p / mass, rng)
            };
            sum += self.spectrum.values[k] * count as f64;
            remaining -= count;
            mass -= p;
        }
        sum
    }
}

fn symmetrize(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    let mut out = m.clone();
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
        }
    }
    out
}

fn binomial(n: u64, p: f64, rng: &mut impl Rng) -> u64 {
    if n == 0 {
        return 0;
    }
    let p = if p.is_finite() { p.clamp(0.0, 1.0) } else { 0.0 };
    Binomial::new(n, p).expect("probability clamped to [0, 1]").sample(rng)
}

/// `⟨ψ|H|ψ⟩` exactly or as the mean of `shots` eigenvalue draws.
pub fn measure_expectation(state: &StateVector, h: &Observable, shots: Shots, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    measure_expectation_with(state, h, shots, &mut rng)
}

pub fn measure_expectation_with(
    state: &StateVector,
    h: &Observable,
    shots: Shots,
    rng: &mut impl Rng,
) -> Result<f64> {
    shots.validate()?;
    if state.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: state.dim(),
        });
    }
    Ok(match shots {
        Shots::Exact => h.expectation_unnormalized(state.amplitudes()),
        Shots::Sampled(n) => h.sample_sum(state.amplitudes(), n, rng) / n as f64,
    })
}

/// One cross-term measurement `⟨ψ₀|U₁†HU₂|ψ₀⟩`.
#[derive(Debug, Clone, Copy)]
pub struct CrossTermJob<'a> {
    pub psi0: &'a StateVector,
    pub u1: &'a ComplexMatrix,
    pub u2: &'a ComplexMatrix,
    pub h: &'a Observable,
    pub part: Part,
    pub shots: Shots,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossTermEstimate {
    pub estimate: f64,
    /// Ancilla probability of outcome 0 (a binomial frequency in sampled mode).
    pub p0: f64,
    pub p1: f64,
    /// Set when a sampled branch received no energy shots.
    pub low_confidence: bool,
}

fn branch_vectors(job: &CrossTermJob<'_>) -> (Vec<Complex64>, Vec<Complex64>) {
    let psi = job.psi0.amplitudes();
    let a = job.u1.apply_unchecked(psi);
    let mut b = job.u2.apply_unchecked(psi);
    if job.part == Part::Im {
        b.iter_mut().for_each(|x| *x *= C_I);
    }
    let plus = a.iter().zip(&b).map(|(x, y)| (x + y) * 0.5).collect();
    let minus = a.iter().zip(&b).map(|(x, y)| (x - y) * 0.5).collect();
    (plus, minus)
}

fn validate_job(job: &CrossTermJob<'_>) -> Result<()> {
    job.shots.validate()?;
    let dim = job.h.dim();
    for found in [job.psi0.dim(), job.u1.dim(), job.u2.dim()] {
        if found != dim {
            return Err(Error::DimensionMismatch { expected: dim, found });
        }
    }
    for u in [job.u1, job.u2] {
        let residual = u.unitarity_residual();
        if !(residual <= UNITARY_TOL) {
            return Err(Error::NotUnitary { residual });
        }
    }
    Ok(())
}

pub fn estimate_cross_term(job: &CrossTermJob<'_>) -> Result<CrossTermEstimate> {
    validate_job(job)?;
    let (plus, minus) = branch_vectors(job);
    let norm = |v: &[Complex64]| v.iter().map(|x| x.norm_sqr()).sum::<f64>();
    let (p0, p1) = (norm(&plus), norm(&minus));
    let sign = match job.part {
        Part::Re => 1.0,
        Part::Im => -1.0,
    };
    match job.shots {
        Shots::Exact => {
            // p_b·Ẽ_b is the unnormalized expectation, which stays defined when p_b = 0.
            let value = job.h.expectation_unnormalized(&plus) - job.h.expectation_unnormalized(&minus);
            Ok(CrossTermEstimate {
                estimate: sign * value,
                p0,
                p1,
                low_confidence: false,
            })
        }
        Shots::Sampled(shots) => {
            let mut rng = ChaCha8Rng::seed_from_u64(job.seed);
            let p0_true = p0 / (p0 + p1);
            let n_p = shots.div_ceil(2);
            let n_e = shots - n_p;
            let hits = binomial(n_p, p0_true, &mut rng);
            let p0_hat = hits as f64 / n_p as f64;
            let p1_hat = 1.0 - p0_hat;
            let c0 = binomial(n_e, p0_true, &mut rng);
            let c1 = n_e - c0;
            let mut low_confidence = false;
            let mut branch = |v: &[Complex64], count: u64| {
                if count == 0 {
                    low_confidence = true;
                    0.0
                } else {
                    job.h.sample_sum(v, count, &mut rng) / count as f64
                }
            };
            let e0 = branch(&plus, c0);
            let e1 = branch(&minus, c1);
            Ok(CrossTermEstimate {
                estimate: sign * (p0_hat * e0 - p1_hat * e1),
                p0: p0_hat,
                p1: p1_hat,
                low_confidence,
            })
        }
    }
}

/// Ancilla statistics from the gate-level circuit on m+1 qubits (ancilla = qubit 0).
#[derive(Debug, Clone)]
pub struct CircuitOutcome {
    pub p0: f64,
    pub p1: f64,
    /// Post-selected system states; `None` when the branch probability vanishes.
    pub branch0: Option<StateVector>,
    pub branch1: Option<StateVector>,
}

/// Returns `(qubit, u)` when `big` acts as the 2×2 unitary `u` on a single qubit.
pub fn as_single_qubit_gate(big: &ComplexMatrix) -> Option<(usize, ComplexMatrix)> {
    let m = big.num_qubits();
    for q in 0..m {
        let shift = m - 1 - q;
        let mut u = ComplexMatrix::zeros(2).ok()?;
        for a in 0..2 {
            for b in 0..2 {
                u[(a, b)] = big[(a << shift, b << shift)];
            }
        }
        if let Ok(embedded) = embed_single(&u, q, m) {
            if embedded.distance(big).ok()? <= 1e-12 && u.unitarity_residual() <= UNITARY_TOL {
                return Some((q, u));
            }
        }
    }
    None
}

/// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ u` with the control as the leading qubit.
fn controlled_block(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = u.dim();
    let mut out = ComplexMatrix::zeros(2 * d)?;
    for i in 0..d {
        out[(i, i)] = C_ONE;
        for j in 0..d {
            out[(d + i, d + j)] = u[(i, j)];
        }
    }
    Ok(out)
}

/// Controlled-u on the leading qubit; single-qubit u goes through `e^{-iα} A X B X C` with CNOTs.
fn controlled_gate(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    let Some((q, small)) = as_single_qubit_gate(u) else {
        return controlled_block(u);
    };
    let m = u.num_qubits();
    let total = m + 1;
    let target = q + 1;
    let f = decompose_single_qubit(&small)?;
    let cnot = controlled_block(&embed_single(&pauli_x(), q, m)?)?;
    let mut phase = ComplexMatrix::identity(2)?;
    phase[(1, 1)] = Complex64::from_polar(1.0, -f.alpha);
    let gates = [
        embed_single(&f.c, target, total)?,
        cnot.clone(),
        embed_single(&f.b, target, total)?,
        cnot,
        embed_single(&f.a, target, total)?,
        embed_single(&phase, 0, total)?,
    ];
    let mut out = ComplexMatrix::identity(1 << total)?;
    for g in &gates {
        out = g.matmul(&out)?;
    }
    Ok(out)
}

/// Simulates H · c₀-U₁ · c₁-U₂' · H on the ancilla, with `U₂' = iU₂` for the imaginary part.
pub fn simulate_hadamard_circuit(
    psi0: &StateVector,
    u1: &ComplexMatrix,
    u2: &ComplexMatrix,
    part: Part,
) -> Result<CircuitOutcome> {
    let dim = psi0.dim();
    for found in [u1.dim(), u2.dim()] {
        if found != dim {
            return Err(Error::DimensionMismatch { expected: dim, found });
        }
    }
    let m = psi0.num_qubits();
    let total = m + 1;
    let u2 = match part {
        Part::Re => u2.clone(),
        Part::Im => u2.scale(C_I),
    };
    let h = (&pauli_x() + &pauli_z()).scale_real(std::f64::consts::FRAC_1_SQRT_2);
    let h_anc = embed_single(&h, 0, total)?;
    let x_anc = embed_single(&pauli_x(), 0, total)?;
    let c0_u1 = x_anc.matmul(&controlled_gate(u1)?)?.matmul(&x_anc)?;
    let c1_u2 = controlled_gate(&u2)?;

    let mut state = vec![C_ZERO; 2 * dim];
    state[..dim].copy_from_slice(psi0.amplitudes());
    for g in [&h_anc, &c0_u1, &c1_u2, &h_anc] {
        state = g.apply_unchecked(&state);
    }
    let (s0, s1) = state.split_at(dim);
    let prob = |s: &[Complex64]| s.iter().map(|x| x.norm_sqr()).sum::<f64>();
    let (p0, p1) = (prob(s0), prob(s1));
    let post = |s: &[Complex64], p: f64| (p > 1e-14).then(|| StateVector::new(s.to_vec()).ok()).flatten();
    Ok(CircuitOutcome {
        p0,
        p1,
        branch0: post(s0, p0),
        branch1: post(s1, p1),
    })
}

/// One weighted unitary of a control-operator split `Q = Σ_k w_k V_k`.
#[derive(Debug, Clone)]
pub struct WeightedUnitary {
    pub weight: Complex64,
    pub unitary: ComplexMatrix,
    pub word: Option<PauliWord>,
}

/// Splits a control operator into weighted Pauli words (unitary and Hermitian).
///
/// Coupling `|0⟩⟨1|` gives `½X + (i/2)Y`, detuning `|1⟩⟨1|` gives `½I − ½Z`, and a pair
/// projector gives four words. The shared entanglement channel sums several pair projectors and
/// is exempt from the term limit.
pub fn default_unitary_split(op: &ControlOperator) -> Result<Vec<WeightedUnitary>> {
    let terms = pauli_decompose(&op.matrix)?;
    let limit = match op.kind {
        ControlKind::SharedEntanglement => usize::MAX,
        _ => MAX_SPLIT_TERMS,
    };
    if terms.is_empty() || terms.len() > limit {
        return Err(Error::UnsplittableControl {
            label: op.label.clone(),
            max: MAX_SPLIT_TERMS,
        });
    }
    Ok(terms
        .into_iter()
        .map(|t| WeightedUnitary {
            weight: t.coefficient,
            unitary: t.word.matrix(),
            word: Some(t.word),
        })
        .collect())
}

/// `Σ_k w_k V_k`.
pub fn reconstruct_split(split: &[WeightedUnitary]) -> Result<ComplexMatrix> {
    let first = split.first().ok_or_else(|| invalid("split", "empty unitary split"))?;
    let mut out = ComplexMatrix::zeros(first.unitary.dim())?;
    for term in split {
        out.add_scaled(&term.unitary, term.weight)?;
    }
    Ok(out)
}

/// Default splits for every operator in a control set.
pub fn control_set_splits(controls: &ControlSet) -> Result<Vec<Vec<WeightedUnitary>>> {
    controls.operators().iter().map(default_unitary_split).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaEstimate {
    pub value: Complex64,
    pub low_confidence: bool,
    /// Cross-term estimates consumed.
    pub evaluations: usize,
}

/// Estimates `η_{l,n} = 2i Σ_k w̄_k (⟨ψ_n|V_k†G|ψ_n⟩ − ⟨ψ_n|GV_k†|ψ_n⟩)` with
/// `G = Γ(t_N,t_n)† H Γ(t_N,t_n)` from cross-term measurements.
///
/// Hermitian `V_k` need two estimates (Re and Im of `⟨V_k†G⟩`), others four.
#[allow(clippy::too_many_arguments)]
pub fn estimate_eta_entry(
    traj: &Trajectory,
    h_mol: &Observable,
    psi0: &StateVector,
    controls: &ControlSet,
    l: usize,
    n: usize,
    split: &[WeightedUnitary],
    shots: Shots,
    seed: u64,
) -> Result<EtaEstimate> {
    let q = controls.get(l).ok_or(Error::IndexOutOfRange {
        index: l,
        len: controls.len(),
    })?;
    if n >= traj.num_steps() {
        return Err(Error::IndexOutOfRange {
            index: n,
            len: traj.num_steps(),
        });
    }
    let residual = reconstruct_split(split)?.distance(&q.matrix)?;
    if residual > 1e-12 {
        return Err(invalid("split", format!("split does not reconstruct `{}` ({residual:.3e})", q.label)));
    }
    for term in split {
        let r = term.unitary.unitarity_residual();
        if !(r <= UNITARY_TOL) {
            return Err(Error::NotUnitary { residual: r });
        }
    }

    let g = h_mol.conjugated_by(&gamma(traj, traj.num_steps(), n)?)?;
    let psi_n = StateVector::new(traj.unitary(n)?.apply_unchecked(psi0.amplitudes()))?;
    let id = ComplexMatrix::identity(psi0.dim())?;
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    let mut low_confidence = false;
    let mut evaluations = 0;
    let mut measure = |u1: &ComplexMatrix| -> Result<Complex64> {
        let part = |part: Part, seed: u64| {
            estimate_cross_term(&CrossTermJob {
                psi0: &psi_n,
                u1,
                u2: &id,
                h: &g,
                part,
                shots,
                seed,
            })
        };
        let re = part(Part::Re, seeds.random())?;
        let im = part(Part::Im, seeds.random())?;
        low_confidence |= re.low_confidence || im.low_confidence;
        evaluations += 2;
        Ok(Complex64::new(re.estimate, im.estimate))
    };

    let mut acc = C_ZERO;
    for term in split {
        // x = ⟨V†G⟩, y = ⟨GV†⟩ = conj(⟨V G⟩); for Hermitian V, y = conj(x).
        let x = measure(&term.unitary)?;
        let y = if term.unitary.hermiticity_residual() <= 1e-14 {
            x.conj()
        } else {
            measure(&term.unitary.adjoint())?.conj()
        };
        acc += term.weight.conj() * (x - y);
    }
    Ok(EtaEstimate {
        value: Complex64::new(0.0, 2.0) * acc,
        low_confidence,
        evaluations,
    })
}

/// Algorithm whose quantum-evaluation cost is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QeKind {
    /// One parameter update of VQE: two energy evaluations.
    Vqe { shots: u64 },
    /// One pulse update of VQOC: `2·K·L·N` cross-term evaluations.
    Vqoc { k: u64, l: u64, n: u64, shots: u64 },
}

/// Quantum evaluations per update: `2·shots` (VQE) or `2·K·L·N·shots` (VQOC).
pub fn qe_count(kind: QeKind) -> u64 {
    match kind {
        QeKind::Vqe { shots } => 2 * shots,
        QeKind::Vqoc { k, l, n, shots } => 2 * k * l * n * shots,
    }
}

/// Running QE totals of one optimization run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QeLedger {
    pub shots_per_evaluation: u64,
    /// QE per accepted update.
    pub per_update: u64,
    pub updates: u64,
    pub total: u64,
    pub breakdown: QeBreakdown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "algorithm", rename_all = "snake_case")]
pub enum QeBreakdown {
    Vqe,
    /// Split size per control (the K of each Q_l), control count and step count.
    Vqoc { k_per_control: Vec<u64>, l: u64, n: u64 },
}

impl QeLedger {
    pub fn vqe(shots: u64) -> Self {
        Self {
            shots_per_evaluation: shots,
            per_update: qe_count(QeKind::Vqe { shots }),
            updates: 0,
            total: 0,
            breakdown: QeBreakdown::Vqe,
        }
    }

    /// Controls with different split sizes contribute `2·K_l·N·shots` each.
    pub fn vqoc(k_per_control: Vec<u64>, n: u64, shots: u64) -> Self {
        let l = k_per_control.len() as u64;
        let per_update = k_per_control
            .iter()
            .map(|&k| qe_count(QeKind::Vqoc { k, l: 1, n, shots }))
            .sum();
        Self {
            shots_per_evaluation: shots,
            per_update,
            updates: 0,
            total: 0,
            breakdown: QeBreakdown::Vqoc { k_per_control, l, n },
        }
    }

    pub fn for_controls(controls: &ControlSet, n: u64, shots: u64) -> Result<Self> {
        let ks = control_set_splits(controls)?
            .iter()
            .map(|s| s.len() as u64)
            .collect();
        Ok(Self::vqoc(ks, n, shots))
    }

    /// Books one update and returns the new cumulative total.
    pub fn record_update(&mut self) -> u64 {
        self.updates += 1;
        self.total += self.per_update;
        self.total
    }
}
