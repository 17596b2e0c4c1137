//! Pauli strings, weighted Pauli sums and their expectation values.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qstate::{Gate, StateVector, MAX_QUBITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(ch: char) -> Option<Self> {
        match ch {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
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

/// Tensor product of single-qubit Paulis; `letters[k]` acts on qubit `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Result<Self> {
        if letters.is_empty() || letters.len() > MAX_QUBITS {
            return Err(Error::OutOfRange {
                what: "Pauli string length",
                value: letters.len().to_string(),
                bound: "1 <= n <= 12",
            });
        }
        Ok(Self { letters })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(vec![Pauli::I; n])
    }

    /// Builds the string `X^x Z^z` (up to phase) from symplectic bit vectors,
    /// where bit `n - k` of each mask refers to qubit `k`.
    pub fn from_masks(n: usize, x: usize, z: usize) -> Result<Self> {
        let letters = (1..=n)
            .map(|k| {
                let bit = 1 << (n - k);
                match (x & bit != 0, z & bit != 0) {
                    (false, false) => Pauli::I,
                    (true, false) => Pauli::X,
                    (true, true) => Pauli::Y,
                    (false, true) => Pauli::Z,
                }
            })
            .collect();
        Self::new(letters)
    }

    pub fn num_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    pub fn is_diagonal(&self) -> bool {
        self.letters
            .iter()
            .all(|&p| matches!(p, Pauli::I | Pauli::Z))
    }

    /// `(x_mask, z_mask, y_count)`: X/Y positions flip bits, Z/Y positions
    /// contribute signs.
    pub(crate) fn masks(&self) -> (usize, usize, u32) {
        let n = self.letters.len();
        let mut x = 0;
        let mut z = 0;
        let mut ny = 0;
        for (k, p) in self.letters.iter().enumerate() {
            let bit = 1 << (n - 1 - k);
            match p {
                Pauli::I => {}
                Pauli::X => x |= bit,
                Pauli::Y => {
                    x |= bit;
                    z |= bit;
                    ny += 1;
                }
                Pauli::Z => z |= bit,
            }
        }
        (x, z, ny)
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let (x1, z1, _) = self.masks();
        let (x2, z2, _) = other.masks();
        ((x1 & z2).count_ones() + (z1 & x2).count_ones()) % 2 == 0
    }

    /// `P|psi>`.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        self.check_dim(state)?;
        let (x, z, ny) = self.masks();
        let amps = state.amplitudes();
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        let phase = i_pow(ny);
        for (i, a) in amps.iter().enumerate() {
            out[i ^ x] = sign(i & z) * phase * a;
        }
        Ok(StateVector::from_raw(state.num_qubits(), out))
    }

    /// `<psi|P|psi>` as a complex number (real for Hermitian P).
    pub fn expectation(&self, state: &StateVector) -> Result<Complex64> {
        self.check_dim(state)?;
        let (x, z, ny) = self.masks();
        let amps = state.amplitudes();
        let acc: Complex64 = amps
            .iter()
            .enumerate()
            .map(|(i, a)| amps[i ^ x].conj() * a * sign(i & z))
            .sum();
        Ok(acc * i_pow(ny))
    }

    fn check_dim(&self, state: &StateVector) -> Result<()> {
        if state.num_qubits() != self.num_qubits() {
            return Err(Error::DimensionMismatch(format!(
                "{}-qubit Pauli string on a {}-qubit state",
                self.num_qubits(),
                state.num_qubits()
            )));
        }
        Ok(())
    }

    /// Gates rotating each qubit's eigenbasis of this string onto Z.
    pub fn measurement_rotation(&self) -> Vec<Gate> {
        let mut gates = Vec::new();
        for (k, p) in self.letters.iter().enumerate() {
            match p {
                Pauli::X => gates.push(Gate::h(k + 1)),
                Pauli::Y => {
                    gates.push(Gate::sdg(k + 1));
                    gates.push(Gate::h(k + 1));
                }
                Pauli::I | Pauli::Z => {}
            }
        }
        gates
    }

    fn support_mask(&self) -> usize {
        let (x, z, _) = self.masks();
        x | z
    }
}

#[inline]
fn sign(bits: usize) -> f64 {
    if bits.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

#[inline]
fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.letters
            .iter()
            .try_for_each(|p| write!(f, "{}", p.as_char()))
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .enumerate()
            .map(|(i, ch)| {
                Pauli::from_char(ch).ok_or_else(|| {
                    Error::parse(
                        format!("letter {}", i + 1),
                        format!("invalid Pauli letter {ch:?} (expected one of IXYZ)"),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }
}

pub fn pauli_apply(p: &PauliString, state: &StateVector) -> Result<StateVector> {
    p.apply(state)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub pauli: PauliString,
}

/// Real-weighted sum of Pauli strings, all on the same register.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    n: usize,
    terms: Vec<Term>,
}

impl Observable {
    pub fn new(n: usize, terms: Vec<Term>) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::OutOfRange {
                what: "observable qubit count",
                value: n.to_string(),
                bound: "1 <= n <= 12",
            });
        }
        for (i, t) in terms.iter().enumerate() {
            if t.pauli.num_qubits() != n {
                return Err(Error::DimensionMismatch(format!(
                    "term {} has {} letters, observable has {} qubits",
                    i + 1,
                    t.pauli.num_qubits(),
                    n
                )));
            }
            if !t.coeff.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "term {} has non-finite coefficient",
                    i + 1
                )));
            }
        }
        Ok(Self { n, terms })
    }

    /// Parses `(coeff, "IZXY...")` pairs.
    pub fn from_pairs(pairs: &[(f64, &str)]) -> Result<Self> {
        let terms = pairs
            .iter()
            .map(|&(coeff, s)| {
                Ok(Term {
                    coeff,
                    pauli: s.parse()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let n = terms
            .first()
            .map(|t| t.pauli.num_qubits())
            .ok_or_else(|| Error::InvalidArgument("observable needs at least one term".into()))?;
        Self::new(n, terms)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(|t| t.pauli.is_diagonal())
    }

    /// Merges duplicate strings and sorts terms lexicographically by letters.
    pub fn canonicalize(&self) -> Observable {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| a.pauli.cmp(&b.pauli));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.pauli == t.pauli => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        Observable {
            n: self.n,
            terms: merged,
        }
    }

    /// `sum_i h_i <psi|P_i|psi>`.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        if state.num_qubits() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{}-qubit observable on a {}-qubit state",
                self.n,
                state.num_qubits()
            )));
        }
        let mut re = 0.0;
        let mut im = 0.0;
        for t in &self.terms {
            let v = t.pauli.expectation(state)?;
            re += t.coeff * v.re;
            im += t.coeff * v.im;
        }
        debug_assert!(im.abs() < 1e-10, "imaginary residue {im}");
        Ok(re)
    }

    /// Shot-sampled estimate `(mean, stderr)`; each term is measured in its
    /// own rotated copy of the state.
    pub fn expectation_sampled(
        &self,
        state: &StateVector,
        shots: u64,
        seed: u64,
    ) -> Result<(f64, f64)> {
        if shots == 0 {
            return Err(Error::InvalidArgument("shots must be at least 1".into()));
        }
        if state.num_qubits() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{}-qubit observable on a {}-qubit state",
                self.n,
                state.num_qubits()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mean = 0.0;
        let mut var = 0.0;
        for t in &self.terms {
            if t.pauli.is_identity() {
                mean += t.coeff;
                continue;
            }
            let mut rotated = state.clone();
            rotated.apply_all(&t.pauli.measurement_rotation())?;
            let mut cumulative = Vec::with_capacity(rotated.dim());
            let mut acc = 0.0;
            for a in rotated.amplitudes() {
                acc += a.norm_sqr();
                cumulative.push(acc);
            }
            let support = t.pauli.support_mask();
            let last = cumulative.len() - 1;
            let mut sum = 0i64;
            for _ in 0..shots {
                let r: f64 = rng.random::<f64>() * acc;
                let outcome = cumulative.partition_point(|&c| c <= r).min(last);
                sum += if (outcome & support).count_ones() % 2 == 0 {
                    1
                } else {
                    -1
                };
            }
            let m = sum as f64 / shots as f64;
            mean += t.coeff * m;
            var += t.coeff * t.coeff * (1.0 - m * m).max(0.0) / shots as f64;
        }
        Ok((mean, var.sqrt()))
    }

    /// Dense `2^n x 2^n` matrix, row-major.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let dim = 1usize << self.n;
        let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
        for t in &self.terms {
            let (x, z, ny) = t.pauli.masks();
            let phase = i_pow(ny) * t.coeff;
            for col in 0..dim {
                m[(col ^ x) * dim + col] += phase * sign(col & z);
            }
        }
        m
    }

    /// Diagonal of the matrix when every term is I/Z-only.
    pub fn diagonal(&self) -> Option<Vec<f64>> {
        if !self.is_diagonal() {
            return None;
        }
        let dim = 1usize << self.n;
        let mut d = vec![0.0; dim];
        for t in &self.terms {
            let (_, z, _) = t.pauli.masks();
            for (i, v) in d.iter_mut().enumerate() {
                *v += t.coeff * sign(i & z);
            }
        }
        Some(d)
    }

    /// SHA-256 of the canonical JSON encoding, hex encoded.
    pub fn content_hash(&self) -> String {
        let doc = self.canonicalize().to_json();
        hex::encode(Sha256::digest(doc.as_bytes()))
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct TermDoc<'a> {
            coeff: f64,
            pauli: &'a str,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            n: usize,
            terms: Vec<TermDoc<'a>>,
        }
        let labels: Vec<String> = self.terms.iter().map(|t| t.pauli.to_string()).collect();
        let doc = Doc {
            n: self.n,
            terms: self
                .terms
                .iter()
                .zip(&labels)
                .map(|(t, l)| TermDoc {
                    coeff: t.coeff,
                    pauli: l,
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("observable serializes");
        s.push('\n');
        s
    }

    /// Decodes the `{"n": .., "terms": [{"coeff": .., "pauli": ".."}]}` format.
    pub fn from_json(text: &str) -> Result<Self> {
        let root: Value = serde_json::from_str(text).map_err(|e| {
            Error::parse(
                format!("line {}, column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        let obj = root
            .as_object()
            .ok_or_else(|| Error::parse("document", "expected a JSON object"))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::parse("field n", "expected a positive integer"))?
            as usize;
        let raw_terms = obj
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("field terms", "expected an array"))?;
        let mut terms = Vec::with_capacity(raw_terms.len());
        for (i, raw) in raw_terms.iter().enumerate() {
            let pos = format!("term {}", i + 1);
            let coeff = raw
                .get("coeff")
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::parse(&pos, "coeff must be a number"))?;
            let label = raw
                .get("pauli")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::parse(&pos, "pauli must be a string"))?;
            let pauli: PauliString = label.parse().map_err(|e| match e {
                Error::Parse { position, message } => {
                    Error::parse(format!("{pos}, {position}"), message)
                }
                other => Error::parse(&pos, other.to_string()),
            })?;
            if pauli.num_qubits() != n {
                return Err(Error::parse(
                    &pos,
                    format!("pauli has {} letters but n = {n}", pauli.num_qubits()),
                ));
            }
            terms.push(Term { coeff, pauli });
        }
        Self::new(n, terms)
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(if t.coeff < 0.0 { " - " } else { " + " })?;
                write!(f, "{} * {}", t.coeff.abs(), t.pauli)?;
            } else {
                write!(f, "{} * {}", t.coeff, t.pauli)?;
            }
        }
        Ok(())
    }
}

pub fn expectation_exact(obs: &Observable, state: &StateVector) -> Result<f64> {
    obs.expectation(state)
}

pub fn expectation_sampled(
    obs: &Observable,
    state: &StateVector,
    shots: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    obs.expectation_sampled(state, shots, seed)
}
