// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{qubit_bit, qubits_for_dim, ComplexMatrix, C_I, C_ONE, C_ZERO};
use crate::error::{invalid, Error, Result};

/// Coefficients below this magnitude are dropped from decompositions.
pub const PAULI_DROP_TOL: f64 = 1e-12;

/// Single-qubit Pauli label. Variant order gives the lexicographic word order `I < X < Y < Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> ComplexMatrix {
        let z = C_ZERO;
        let o = C_ONE;
        let entries = match self {
            Pauli::I => vec![o, z, z, o],
            Pauli::X => vec![z, o, o, z],
            Pauli::Y => vec![z, -C_I, C_I, z],
            Pauli::Z => vec![o, z, z, -o],
        };
        ComplexMatrix::from_row_major(2, entries).expect("2x2 is a valid dimension")
    }

    fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    /// Entry `⟨row|P|row ⊕ flip⟩` for the single nonzero column of this row.
    fn row_value(self, row_bit: usize) -> Complex64 {
        match (self, row_bit) {
            (Pauli::I, _) | (Pauli::X, _) => C_ONE,
            (Pauli::Y, 0) => -C_I,
            (Pauli::Y, _) => C_I,
            (Pauli::Z, 0) => C_ONE,
            (Pauli::Z, _) => -C_ONE,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis; the first letter acts on qubit 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliWord(Vec<Pauli>);

impl PauliWord {
    pub fn new(letters: Vec<Pauli>) -> Result<Self> {
        if letters.is_empty() || letters.len() > super::MAX_QUBITS {
            return Err(invalid("word", format!("word length {} out of range", letters.len())));
        }
        Ok(Self(letters))
    }

    pub fn identity(m: usize) -> Result<Self> {
        Self::new(vec![Pauli::I; m])
    }

    /// Word with `pauli` on `qubit` and identity elsewhere.
    pub fn single(m: usize, qubit: usize, pauli: Pauli) -> Result<Self> {
        let mut w = vec![Pauli::I; m];
        if qubit >= m {
            return Err(Error::IndexOutOfRange { index: qubit, len: m });
        }
        w[qubit] = pauli;
        Self::new(w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.0
    }

    fn flip_mask(&self) -> usize {
        let m = self.0.len();
        self.0
            .iter()
            .enumerate()
            .filter(|(_, p)| p.flips())
            .fold(0, |acc, (q, _)| acc | (1 << (m - 1 - q)))
    }

    /// Value of row `i` at its single nonzero column `i ^ flip_mask`.
    fn row_value(&self, i: usize) -> Complex64 {
        let m = self.0.len();
        self.0
            .iter()
            .enumerate()
            .fold(C_ONE, |acc, (q, p)| acc * p.row_value(qubit_bit(i, q, m)))
    }

    /// Dense matrix of the word.
    pub fn matrix(&self) -> ComplexMatrix {
        let dim = 1usize << self.0.len();
        let mask = self.flip_mask();
        let mut out = ComplexMatrix::zeros(dim).expect("word length validated");
        for i in 0..dim {
            out[(i, i ^ mask)] = self.row_value(i);
        }
        out
    }

    /// Words in lexicographic order for an m-qubit register.
    fn from_index(m: usize, mut index: usize) -> Self {
        let mut letters = vec![Pauli::I; m];
        for q in (0..m).rev() {
            letters[q] = Pauli::ALL[index & 3];
            index >>= 2;
        }
        Self(letters)
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|ch| match ch {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(invalid("word", format!("unexpected Pauli letter {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }
}

/// `coefficient · P_word`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coefficient: Complex64,
    pub word: PauliWord,
}

impl PauliTerm {
    pub fn new(coefficient: Complex64, word: PauliWord) -> Self {
        Self { coefficient, word }
    }
}

/// Expands `a` in the Pauli basis: `c_w = ⟨P_w, a⟩_F / 2^m`, ordered lexicographically by word.
pub fn pauli_decompose(a: &ComplexMatrix) -> Result<Vec<PauliTerm>> {
    let dim = a.dim();
    let m = qubits_for_dim(dim)?;
    let norm = 1.0 / dim as f64;
    let mut terms = Vec::new();
    for index in 0..(1usize << (2 * m)) {
        let word = PauliWord::from_index(m, index);
        let mask = word.flip_mask();
        let mut acc = C_ZERO;
        for i in 0..dim {
            acc += word.row_value(i).conj() * a[(i, i ^ mask)];
        }
        let coefficient = acc * norm;
        if coefficient.norm() >= PAULI_DROP_TOL {
            terms.push(PauliTerm { coefficient, word });
        }
    }
    Ok(terms)
}

/// `Σ c_w P_w` on an m-qubit register.
pub fn reconstruct(terms: &[PauliTerm], m: usize) -> Result<ComplexMatrix> {
    let dim = 1usize << m;
    let mut out = ComplexMatrix::zeros(dim)?;
    for term in terms {
        if term.word.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: term.word.len(),
            });
        }
        let mask = term.word.flip_mask();
        for i in 0..dim {
            out[(i, i ^ mask)] += term.coefficient * term.word.row_value(i);
        }
    }
    Ok(out)
}
