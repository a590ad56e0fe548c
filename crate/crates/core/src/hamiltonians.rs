// SPDX-License-Identifier: Apache-2.0

//! Drift and control Hamiltonians of an equidistant Rydberg chain, the
//! assembled `H[z] = H_d + Σ_l (Q_l z_l + Q_l† z̄_l)`, and the Pauli-term
//! file format for problem Hamiltonians.
//!
//! Energies are angular frequencies in rad/ms and times are in ms (ħ = 1).

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::qcore::{
    qubit_bit, reconstruct, ComplexMatrix, PauliTerm, PauliWord, C_ONE, C_ZERO, MAX_QUBITS,
};

pub use crate::qcore::HermitianOperator;

/// Van der Waals drift of a 1-D chain with nearest-neighbour spacing `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftSpec {
    pub m: usize,
    pub c6: f64,
    pub r: f64,
}

impl DriftSpec {
    pub fn new(m: usize, c6: f64, r: f64) -> Result<Self> {
        let spec = Self { m, c6, r };
        spec.validate()?;
        Ok(spec)
    }

    /// Spec whose nearest-neighbour interaction `C₆/R⁶` equals `v` at `R = 1`.
    pub fn with_interaction(m: usize, v: f64) -> Result<Self> {
        Self::new(m, v, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.m > MAX_QUBITS {
            return Err(invalid("m", format!("qubit count {} out of range", self.m)));
        }
        if !(self.r > 0.0) {
            return Err(invalid("r", "spacing must be positive"));
        }
        if !(self.c6 >= 0.0) {
            return Err(invalid("c6", "C6 must be non-negative"));
        }
        Ok(())
    }

    /// Nearest-neighbour interaction strength `V = C₆/R⁶`.
    pub fn interaction(&self) -> f64 {
        self.c6 / self.r.powi(6)
    }
}

/// `H_d = Σ_{i<j} C₆/R_ij⁶ |11⟩⟨11|_ij` with `R_ij = R|i−j|`, each unordered pair once.
pub fn build_drift_vdw(spec: &DriftSpec) -> Result<HermitianOperator> {
    spec.validate()?;
    let m = spec.m;
    let dim = 1usize << m;
    let diag: Vec<Complex64> = (0..dim)
        .map(|b| {
            let mut e = 0.0;
            for i in 0..m {
                for j in (i + 1)..m {
                    if qubit_bit(b, i, m) == 1 && qubit_bit(b, j, m) == 1 {
                        e += spec.c6 / (spec.r * (j - i) as f64).powi(6);
                    }
                }
            }
            Complex64::new(e, 0.0)
        })
        .collect();
    HermitianOperator::new(ComplexMatrix::from_diagonal(&diag)?, "H_d")
}

/// Which control families are switched on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ControlFamilies {
    /// `|0⟩⟨1|_l` per qubit (rotational control).
    pub coupling: bool,
    /// `|1⟩⟨1|_l` per qubit.
    pub detuning: bool,
    /// `R_lk⁻⁶ |11⟩⟨11|_lk` pair controls.
    pub entanglement: bool,
    /// Collapse all pair controls into one channel with a common amplitude.
    pub shared_entanglement: bool,
}

impl Default for ControlFamilies {
    fn default() -> Self {
        Self::rotational()
    }
}

impl ControlFamilies {
    pub const fn rotational() -> Self {
        Self {
            coupling: true,
            detuning: false,
            entanglement: false,
            shared_entanglement: false,
        }
    }

    pub const fn all() -> Self {
        Self {
            coupling: true,
            detuning: true,
            entanglement: true,
            shared_entanglement: false,
        }
    }

    /// Rotational control plus one shared entanglement channel.
    pub const fn rotational_shared_entanglement() -> Self {
        Self {
            coupling: true,
            detuning: false,
            entanglement: true,
            shared_entanglement: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlKind {
    Coupling { qubit: usize },
    Detuning { qubit: usize },
    Entanglement { first: usize, second: usize },
    SharedEntanglement,
}

impl ControlKind {
    pub fn is_hermitian(&self) -> bool {
        !matches!(self, ControlKind::Coupling { .. })
    }
}

#[derive(Debug, Clone)]
pub struct ControlOperator {
    pub label: String,
    pub kind: ControlKind,
    pub matrix: ComplexMatrix,
}

/// Ordered control operators `Q_1 … Q_L`: coupling block, detuning block, entanglement block.
#[derive(Debug, Clone)]
pub struct ControlSet {
    m: usize,
    families: ControlFamilies,
    operators: Vec<ControlOperator>,
}

impl ControlSet {
    /// Builds a set from explicit operators (all of dimension `2^m`).
    pub fn from_operators(m: usize, operators: Vec<ControlOperator>) -> Result<Self> {
        let dim = 1usize << m;
        for op in &operators {
            if op.matrix.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: op.matrix.dim(),
                });
            }
        }
        Ok(Self {
            m,
            families: ControlFamilies {
                coupling: false,
                detuning: false,
                entanglement: false,
                shared_entanglement: false,
            },
            operators,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn num_qubits(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        1 << self.m
    }

    pub fn families(&self) -> ControlFamilies {
        self.families
    }

    pub fn operators(&self) -> &[ControlOperator] {
        &self.operators
    }

    pub fn get(&self, l: usize) -> Option<&ControlOperator> {
        self.operators.get(l)
    }

    /// `Q_max = max_l ‖Q_l‖_F`.
    pub fn q_max(&self) -> f64 {
        self.operators
            .iter()
            .map(|op| op.matrix.frobenius_norm())
            .fold(0.0, f64::max)
    }
}

fn pair_projector(m: usize, first: usize, second: usize, weight: f64) -> Result<ComplexMatrix> {
    let dim = 1usize << m;
    let diag: Vec<Complex64> = (0..dim)
        .map(|b| {
            if qubit_bit(b, first, m) == 1 && qubit_bit(b, second, m) == 1 {
                Complex64::new(weight, 0.0)
            } else {
                C_ZERO
            }
        })
        .collect();
    ComplexMatrix::from_diagonal(&diag)
}

/// Builds the control operators for an m-qubit chain with spacing `r`.
pub fn build_control_set(m: usize, families: ControlFamilies, r: f64) -> Result<ControlSet> {
    if m == 0 || m > MAX_QUBITS {
        return Err(invalid("m", format!("qubit count {m} out of range")));
    }
    if !(families.coupling || families.detuning || families.entanglement) {
        return Err(invalid("families", "at least one control family must be enabled"));
    }
    if families.entanglement && m < 2 {
        return Err(invalid("families", "entanglement control needs at least two qubits"));
    }
    if families.entanglement && !(r > 0.0) {
        return Err(invalid("r", "spacing must be positive"));
    }

    let dim = 1usize << m;
    let mut operators = Vec::new();
    if families.coupling {
        for q in 0..m {
            let mut op = ComplexMatrix::zeros(dim)?;
            for b in 0..dim {
                // |0⟩⟨1| on qubit q maps b (bit 1) to b with bit cleared.
                if qubit_bit(b, q, m) == 1 {
                    op[(b ^ (1 << (m - 1 - q)), b)] = C_ONE;
                }
            }
            operators.push(ControlOperator {
                label: format!("coupling[{q}]"),
                kind: ControlKind::Coupling { qubit: q },
                matrix: op,
            });
        }
    }
    if families.detuning {
        for q in 0..m {
            let diag: Vec<Complex64> = (0..dim)
                .map(|b| if qubit_bit(b, q, m) == 1 { C_ONE } else { C_ZERO })
                .collect();
            operators.push(ControlOperator {
                label: format!("detuning[{q}]"),
                kind: ControlKind::Detuning { qubit: q },
                matrix: ComplexMatrix::from_diagonal(&diag)?,
            });
        }
    }
    if families.entanglement {
        let weight = |l: usize, k: usize| 1.0 / (r * l.abs_diff(k) as f64).powi(6);
        if families.shared_entanglement {
            let mut shared = ComplexMatrix::zeros(dim)?;
            for l in 0..m {
                for k in (0..m).filter(|&k| k != l) {
                    shared.add_scaled(&pair_projector(m, l, k, weight(l, k))?, C_ONE)?;
                }
            }
            operators.push(ControlOperator {
                label: "entanglement[shared]".into(),
                kind: ControlKind::SharedEntanglement,
                matrix: shared,
            });
        } else {
            for l in 0..m {
                for k in (0..m).filter(|&k| k != l) {
                    operators.push(ControlOperator {
                        label: format!("entanglement[{l},{k}]"),
                        kind: ControlKind::Entanglement { first: l, second: k },
                        matrix: pair_projector(m, l, k, weight(l, k))?,
                    });
                }
            }
        }
    }

    Ok(ControlSet {
        m,
        families,
        operators,
    })
}

/// `H[z] = H_d + Σ_l (Q_l z_l + Q_l† z̄_l)`, exactly Hermitian entrywise.
pub fn assemble(
    h_d: &HermitianOperator,
    controls: &ControlSet,
    z: &[Complex64],
) -> Result<HermitianOperator> {
    if z.len() != controls.len() {
        return Err(Error::DimensionMismatch {
            expected: controls.len(),
            found: z.len(),
        });
    }
    let dim = h_d.dim();
    if dim != controls.dim() {
        return Err(Error::DimensionMismatch {
            expected: controls.dim(),
            found: dim,
        });
    }
    let mut hc = ComplexMatrix::zeros(dim)?;
    for (op, zl) in controls.operators.iter().zip(z) {
        if *zl != C_ZERO {
            hc.add_scaled(&op.matrix, *zl)?;
        }
    }
    let hd = h_d.matrix();
    let mut h = ComplexMatrix::zeros(dim)?;
    for i in 0..dim {
        for j in 0..dim {
            // (C + C†)_ij computed in the same order for (i,j) and (j,i) keeps H = H† bitwise.
            let s = hc[(i, j)] + hc[(j, i)].conj();
            h[(i, j)] = hd[(i, j)] + s;
        }
    }
    HermitianOperator::new(h, "H[z]")
}

/// Problem Hamiltonian read from a Pauli-term file.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularHamiltonian {
    pub qubits: usize,
    pub terms: Vec<(f64, PauliWord)>,
    pub metadata: MolecularMetadata,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MolecularMetadata {
    pub qubits: usize,
    pub energy_fci: Option<f64>,
    pub energy_hf: Option<f64>,
    pub units: Option<String>,
}

impl MolecularMetadata {
    pub fn is_hartree(&self) -> bool {
        self.units
            .as_deref()
            .is_some_and(|u| u.eq_ignore_ascii_case("hartree"))
    }
}

impl MolecularHamiltonian {
    pub fn from_terms(qubits: usize, terms: Vec<(f64, PauliWord)>) -> Result<Self> {
        for (_, w) in &terms {
            if w.len() != qubits {
                return Err(Error::DimensionMismatch {
                    expected: qubits,
                    found: w.len(),
                });
            }
        }
        Ok(Self {
            qubits,
            terms,
            metadata: MolecularMetadata {
                qubits,
                ..Default::default()
            },
        })
    }

    /// Dense `Σ c_w P_w`.
    pub fn operator(&self) -> Result<HermitianOperator> {
        let terms: Vec<PauliTerm> = self
            .terms
            .iter()
            .map(|(c, w)| PauliTerm::new(Complex64::new(*c, 0.0), w.clone()))
            .collect();
        HermitianOperator::new(reconstruct(&terms, self.qubits)?, "H_mol")
    }

    /// Serializes to the Pauli-term file format with 17 significant digits per coefficient.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "qubits: {}", self.qubits);
        if let Some(e) = self.metadata.energy_fci {
            let _ = writeln!(out, "# energy_fci: {e:.16e}");
        }
        if let Some(e) = self.metadata.energy_hf {
            let _ = writeln!(out, "# energy_hf: {e:.16e}");
        }
        if let Some(u) = &self.metadata.units {
            let _ = writeln!(out, "# units: {u}");
        }
        for (c, w) in &self.terms {
            let _ = writeln!(out, "{c:.16e} {w}");
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_file_string()).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }
}

/// Parses a real coefficient, distinguishing complex literals with nonzero imaginary part.
fn parse_coefficient(token: &str, line: usize) -> Result<f64> {
    if let Ok(v) = token.parse::<f64>() {
        return Ok(v);
    }
    let parse_err = || Error::Parse {
        line,
        message: format!("cannot parse coefficient {token:?}"),
    };
    let (re, im) = if let Some(inner) = token.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let (a, b) = inner.split_once(',').ok_or_else(parse_err)?;
        (
            a.trim().parse::<f64>().map_err(|_| parse_err())?,
            b.trim().parse::<f64>().map_err(|_| parse_err())?,
        )
    } else if let Some(body) = token.strip_suffix(['i', 'j']) {
        // a+bi / a-bi / bi; the split point is the last sign not following an exponent marker.
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        match split {
            Some(k) => {
                let im_part = &body[k..];
                let im = match im_part {
                    "+" => 1.0,
                    "-" => -1.0,
                    s => s.parse::<f64>().map_err(|_| parse_err())?,
                };
                (body[..k].parse::<f64>().map_err(|_| parse_err())?, im)
            }
            None => (0.0, body.parse::<f64>().map_err(|_| parse_err())?),
        }
    } else {
        return Err(parse_err());
    };
    if im != 0.0 {
        return Err(Error::Parse {
            line,
            message: format!("coefficient {token:?} is not real (imaginary part {im})"),
        });
    }
    Ok(re)
}

/// Parses the Pauli-term text format.
///
/// ```text
/// qubits: 2
/// # energy_fci: -1.137
/// # units: hartree
/// -0.81 II
/// 0.17 ZZ
/// ```
pub fn parse_molecular(text: &str) -> Result<MolecularHamiltonian> {
    let mut qubits: Option<usize> = None;
    let mut metadata = MolecularMetadata::default();
    let mut terms: Vec<(f64, PauliWord)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once(':') {
                let value = value.trim();
                let number = || {
                    value.parse::<f64>().map_err(|_| Error::Parse {
                        line: line_no,
                        message: format!("invalid number {value:?} for `{}`", key.trim()),
                    })
                };
                match key.trim() {
                    "energy_fci" => metadata.energy_fci = Some(number()?),
                    "energy_hf" => metadata.energy_hf = Some(number()?),
                    "units" => metadata.units = Some(value.to_string()),
                    _ => {}
                }
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("qubits:") {
            if qubits.is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "duplicate `qubits:` header".into(),
                });
            }
            let m = rest.trim().parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid qubit count {:?}", rest.trim()),
            })?;
            if m == 0 || m > MAX_QUBITS {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("qubit count {m} out of range 1..={MAX_QUBITS}"),
                });
            }
            qubits = Some(m);
            continue;
        }
        let m = qubits.ok_or_else(|| Error::Parse {
            line: line_no,
            message: "term before `qubits:` header".into(),
        })?;
        let mut tokens = line.split_whitespace();
        let (Some(coef), Some(word), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: line_no,
                message: "expected `<coefficient> <word>`".into(),
            });
        };
        let coefficient = parse_coefficient(coef, line_no)?;
        let word: PauliWord = word.parse().map_err(|e: Error| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if word.len() != m {
            return Err(Error::Parse {
                line: line_no,
                message: format!("word {word} has length {}, expected {m}", word.len()),
            });
        }
        terms.push((coefficient, word));
    }

    let qubits = qubits.ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing `qubits:` header".into(),
    })?;
    metadata.qubits = qubits;
    Ok(MolecularHamiltonian {
        qubits,
        terms,
        metadata,
    })
}

/// Reads a Pauli-term file and returns the dense operator plus its metadata.
pub fn load_molecular(path: &Path) -> Result<(HermitianOperator, MolecularMetadata)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let parsed = parse_molecular(&text)?;
    Ok((parsed.operator()?, parsed.metadata))
}
