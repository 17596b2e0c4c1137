//! Complete sets of mutually unbiased bases for up to three qubits, partial
//! MUB enumeration for larger registers, and shifted MUB states.
//!
//! Every non-computational basis is the joint eigenbasis of a class
//! `{X^a Z^{M a} : a != 0}` for a symmetric binary matrix `M`. A set of `2^n`
//! such matrices whose pairwise differences are invertible over GF(2) yields
//! `2^n` mutually commuting classes; together with the Z-type class they
//! partition the `4^n - 1` non-identity Pauli strings. The eigenbasis of the
//! `M` class is `D_M H^{⊗n} |j>` where `D_M = diag(i^{x^T M x})`, i.e. a
//! Hadamard layer followed by `S` on every diagonal entry and `CZ` on every
//! off-diagonal pair of `M`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::qstate::{qubit_mask, Gate, StateVector};
use crate::vqa::{Ansatz, ParameterVector};

/// Largest register with a complete MUB set.
pub const MAX_FULL_QUBITS: usize = 3;

/// Symmetric `n x n` matrix over GF(2); `rows[i]` holds row `i + 1` as a
/// qubit mask.
#[derive(Clone, Debug, PartialEq, Eq)]
struct BinarySymmetric {
    n: usize,
    rows: Vec<usize>,
}

impl BinarySymmetric {
    /// Decodes the upper triangle (row-major) from the low bits of `code`.
    fn from_code(n: usize, code: usize) -> Self {
        let mut rows = vec![0; n];
        let mut bit = 0;
        for i in 1..=n {
            for j in i..=n {
                if code >> bit & 1 == 1 {
                    rows[i - 1] |= qubit_mask(n, j);
                    rows[j - 1] |= qubit_mask(n, i);
                }
                bit += 1;
            }
        }
        Self { n, rows }
    }

    fn entry(&self, i: usize, j: usize) -> bool {
        self.rows[i - 1] & qubit_mask(self.n, j) != 0
    }

    /// `M a` with both sides as qubit masks.
    fn apply(&self, a: usize) -> usize {
        (1..=self.n)
            .filter(|&i| (self.rows[i - 1] & a).count_ones() % 2 == 1)
            .fold(0, |acc, i| acc | qubit_mask(self.n, i))
    }

    fn add(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    fn is_invertible(&self) -> bool {
        (1..1usize << self.n).all(|a| self.apply(a) != 0)
    }

    /// `x^T M x` over the integers mod 4.
    fn quadratic_form(&self, x: usize) -> u32 {
        let mut q = 0;
        for i in 1..=self.n {
            if x & qubit_mask(self.n, i) == 0 {
                continue;
            }
            if self.entry(i, i) {
                q += 1;
            }
            for j in i + 1..=self.n {
                if x & qubit_mask(self.n, j) != 0 && self.entry(i, j) {
                    q += 2;
                }
            }
        }
        q % 4
    }
}

/// First (in code order) set of `2^n` symmetric matrices, starting with zero,
/// whose pairwise differences are all invertible.
fn symmetric_spread(n: usize) -> Vec<BinarySymmetric> {
    let codes = 1usize << (n * (n + 1) / 2);
    let candidates: Vec<BinarySymmetric> = (0..codes)
        .map(|c| BinarySymmetric::from_code(n, c))
        .collect();
    let target = 1usize << n;

    fn extend(
        chosen: &mut Vec<usize>,
        next: usize,
        target: usize,
        cands: &[BinarySymmetric],
    ) -> bool {
        if chosen.len() == target {
            return true;
        }
        for c in next..cands.len() {
            if chosen
                .iter()
                .all(|&k| cands[k].add(&cands[c]).is_invertible())
            {
                chosen.push(c);
                if extend(chosen, c + 1, target, cands) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    let mut chosen = vec![0];
    let found = extend(&mut chosen, 1, target, &candidates);
    assert!(found, "no symmetric spread for n = {n}");
    chosen.into_iter().map(|k| candidates[k].clone()).collect()
}

/// How a basis is generated from the computational basis.
#[derive(Clone, Debug, PartialEq, Eq)]
enum BasisKind {
    Computational,
    Phased(BinarySymmetric),
}

/// `d + 1` pairwise unbiased orthonormal bases of `d = 2^n` states each.
#[derive(Clone, Debug)]
pub struct MubSet {
    n: usize,
    bases: Vec<Vec<StateVector>>,
    kinds: Vec<Option<BasisKind>>,
}

impl MubSet {
    /// Wraps arbitrary bases without any structural claims (e.g. shifted or
    /// hand-modified sets). Preparation circuits are unavailable for these.
    pub fn from_bases(n: usize, bases: Vec<Vec<StateVector>>) -> Result<Self> {
        if bases.iter().flatten().any(|s| s.num_qubits() != n) {
            return Err(Error::DimensionMismatch(format!(
                "every basis state must have {n} qubits"
            )));
        }
        let kinds = vec![None; bases.len()];
        Ok(Self { n, bases, kinds })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn bases(&self) -> &[Vec<StateVector>] {
        &self.bases
    }

    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn num_states(&self) -> usize {
        self.bases.iter().map(Vec::len).sum()
    }

    pub fn state(&self, basis: usize, index: usize) -> &StateVector {
        &self.bases[basis][index]
    }

    /// Non-identity Pauli strings stabilizing basis `basis` (sorted), when the
    /// set came from [`build_full_mub_set`].
    pub fn stabilizer_class(&self, basis: usize) -> Option<Vec<PauliString>> {
        let kind = self.kinds.get(basis)?.as_ref()?;
        let n = self.n;
        let mut class: Vec<PauliString> = (1..1usize << n)
            .map(|a| match kind {
                BasisKind::Computational => PauliString::from_masks(n, 0, a),
                BasisKind::Phased(m) => PauliString::from_masks(n, a, m.apply(a)),
            })
            .collect::<Result<_>>()
            .ok()?;
        class.sort();
        Some(class)
    }

    /// Circuit taking `|0...0>` to `state(basis, index)` using X, H, S and
    /// CNOT gates (CZ is realized as H-CNOT-H).
    pub fn preparation_circuit(&self, basis: usize, index: usize) -> Option<Vec<Gate>> {
        let kind = self.kinds.get(basis)?.as_ref()?;
        if index >= self.dim() {
            return None;
        }
        let n = self.n;
        let mut gates: Vec<Gate> = (1..=n)
            .filter(|&k| index & qubit_mask(n, k) != 0)
            .map(Gate::x)
            .collect();
        if let BasisKind::Phased(m) = kind {
            gates.extend((1..=n).map(Gate::h));
            gates.extend((1..=n).filter(|&k| m.entry(k, k)).map(Gate::s));
            for i in 1..=n {
                for j in i + 1..=n {
                    if m.entry(i, j) {
                        gates.push(Gate::h(j));
                        gates.push(Gate::Cnot {
                            control: i,
                            target: j,
                        });
                        gates.push(Gate::h(j));
                    }
                }
            }
        }
        Some(gates)
    }

    /// Applies `U(theta0)` to every state.
    pub fn shifted(&self, ansatz: &Ansatz, theta0: &ParameterVector) -> Result<MubSet> {
        let bases = self
            .bases
            .iter()
            .map(|b| b.iter().map(|s| shift_state(s, ansatz, theta0)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        MubSet::from_bases(self.n, bases)
    }

    /// `mub export` document: `{"n": .., "bases": [[[[re, im], ..], ..], ..]}`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc {
            n: usize,
            bases: Vec<Vec<Vec<[f64; 2]>>>,
        }
        let doc = Doc {
            n: self.n,
            bases: self
                .bases
                .iter()
                .map(|b| {
                    b.iter()
                        .map(|s| s.amplitudes().iter().map(|a| [a.re, a.im]).collect())
                        .collect()
                })
                .collect(),
        };
        let mut s = serde_json::to_string(&doc).expect("MUB set serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct Doc {
            n: usize,
            bases: Vec<Vec<Vec<[f64; 2]>>>,
        }
        let doc: Doc = serde_json::from_str(text)?;
        let bases = doc
            .bases
            .into_iter()
            .map(|b| {
                b.into_iter()
                    .map(|s| {
                        StateVector::from_amplitudes(
                            doc.n,
                            s.into_iter()
                                .map(|[re, im]| Complex64::new(re, im))
                                .collect(),
                        )
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<_>>>>()?;
        MubSet::from_bases(doc.n, bases)
    }
}

fn phased_basis(n: usize, m: &BinarySymmetric) -> Vec<StateVector> {
    let dim = 1usize << n;
    let scale = 1.0 / (dim as f64).sqrt();
    let phases: Vec<Complex64> = (0..dim)
        .map(|x| match m.quadratic_form(x) {
            0 => Complex64::new(scale, 0.0),
            1 => Complex64::new(0.0, scale),
            2 => Complex64::new(-scale, 0.0),
            _ => Complex64::new(0.0, -scale),
        })
        .collect();
    (0..dim)
        .map(|j| {
            let amps = (0..dim)
                .map(|x| {
                    if (j & x).count_ones() % 2 == 0 {
                        phases[x]
                    } else {
                        -phases[x]
                    }
                })
                .collect();
            StateVector::from_raw(n, amps)
        })
        .collect()
}

/// Complete MUB set for `n` in `1..=3`: basis 0 is computational, basis 1
/// the transversal Hadamard basis, the rest ordered by the smallest Pauli
/// string of their stabilizer class.
pub fn build_full_mub_set(n: usize) -> Result<MubSet> {
    if n == 0 || n > MAX_FULL_QUBITS {
        return Err(Error::OutOfRange {
            what: "full MUB qubit count",
            value: n.to_string(),
            bound: "n <= 3",
        });
    }
    let spread = symmetric_spread(n);
    let smallest = |m: &BinarySymmetric| {
        (1..1usize << n)
            .map(|a| PauliString::from_masks(n, a, m.apply(a)).expect("n in range"))
            .min()
            .expect("nonempty class")
    };
    let mut rest: Vec<(PauliString, BinarySymmetric)> = spread[1..]
        .iter()
        .map(|m| (smallest(m), m.clone()))
        .collect();
    rest.sort_by(|a, b| a.0.cmp(&b.0));

    let dim = 1usize << n;
    let mut bases = vec![(0..dim)
        .map(|j| StateVector::basis(n, j))
        .collect::<Result<Vec<_>>>()?];
    let mut kinds = vec![Some(BasisKind::Computational)];
    for m in std::iter::once(spread[0].clone()).chain(rest.into_iter().map(|(_, m)| m)) {
        bases.push(phased_basis(n, &m));
        kinds.push(Some(BasisKind::Phased(m)));
    }
    Ok(MubSet { n, bases, kinds })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MubReport {
    pub n: usize,
    pub num_bases: usize,
    pub num_states: usize,
    /// `max |<a|b> - delta_ab|` over pairs within a basis.
    pub max_orthonormality_deviation: f64,
    /// `max ||<a|b>| - 1/sqrt(d)|` over pairs from distinct bases.
    pub max_unbiasedness_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

pub fn verify_mub_set(set: &MubSet, tol: f64) -> MubReport {
    let target = 1.0 / (set.dim() as f64).sqrt();
    let mut ortho: f64 = 0.0;
    let mut unbiased: f64 = 0.0;
    let all: Vec<(usize, usize, &StateVector)> = set
        .bases
        .iter()
        .enumerate()
        .flat_map(|(b, states)| states.iter().enumerate().map(move |(i, s)| (b, i, s)))
        .collect();
    for (x, &(ba, ia, a)) in all.iter().enumerate() {
        for &(bb, ib, b) in &all[x..] {
            let ip = a.inner(b).unwrap_or(Complex64::new(f64::NAN, 0.0));
            if ba == bb {
                let expect = if ia == ib { 1.0 } else { 0.0 };
                ortho = nan_max(ortho, (ip - expect).norm());
            } else {
                unbiased = nan_max(unbiased, (ip.norm() - target).abs());
            }
        }
    }
    MubReport {
        n: set.n,
        num_bases: set.num_bases(),
        num_states: set.num_states(),
        max_orthonormality_deviation: ortho,
        max_unbiasedness_deviation: unbiased,
        tolerance: tol,
        passed: ortho < tol && unbiased < tol,
    }
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// One partial-DQES sample point: a MUB state of the `k`-qubit set placed on
/// `subset`, with every other qubit in `|0>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PartialMubSpec {
    pub n: usize,
    pub k: usize,
    /// 1-based, strictly increasing.
    pub subset: Vec<usize>,
    pub basis_index: usize,
    pub state_index: usize,
}

impl PartialMubSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = self.subset.len() == self.k
            && self.subset.windows(2).all(|w| w[0] < w[1])
            && self.subset.iter().all(|&q| q >= 1 && q <= self.n)
            && self.basis_index <= 1 << self.k
            && self.state_index < 1 << self.k;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "invalid partial MUB spec {self:?}"
            )))
        }
    }

    /// Subset as `1-2-3`.
    pub fn subset_label(&self) -> String {
        self.subset
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join("-")
    }

    pub fn label(&self) -> String {
        format!(
            "b{}s{}@{}",
            self.basis_index,
            self.state_index,
            self.subset_label()
        )
    }

    /// Inverse of [`label`](Self::label) for an `n`-qubit problem. The
    /// subset may be omitted (`b1s2`), meaning all `n` qubits.
    pub fn parse_label(n: usize, label: &str) -> Result<Self> {
        let bad = |msg: &str| Error::parse(format!("spec {label:?}"), msg);
        let (head, subset) = match label.split_once('@') {
            Some((h, s)) => (h, Some(s)),
            None => (label, None),
        };
        let rest = head
            .strip_prefix('b')
            .ok_or_else(|| bad("expected b<basis>s<state>"))?;
        let (b, st) = rest
            .split_once('s')
            .ok_or_else(|| bad("expected b<basis>s<state>"))?;
        let basis_index = b
            .parse()
            .map_err(|_| bad("basis index is not an integer"))?;
        let state_index = st
            .parse()
            .map_err(|_| bad("state index is not an integer"))?;
        let subset: Vec<usize> = match subset {
            Some(s) => s
                .split('-')
                .map(|q| q.parse().map_err(|_| bad("subset must look like 1-2-3")))
                .collect::<Result<_>>()?,
            None => (1..=n).collect(),
        };
        let spec = Self {
            n,
            k: subset.len(),
            subset,
            basis_index,
            state_index,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Number of K-subsets times `(2^K + 1) 2^K`.
pub fn partial_spec_count(n: usize, k: usize) -> usize {
    binomial(n, k) * ((1 << k) + 1) * (1 << k)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Lexicographic K-subsets of `1..=n`.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i + 1) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn check_partial_args(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > MAX_FULL_QUBITS || k > n {
        return Err(Error::OutOfRange {
            what: "partial MUB constant K",
            value: k.to_string(),
            bound: "1 <= K <= min(n, 3)",
        });
    }
    Ok(())
}

/// Subsets in lexicographic order, then basis index, then state index.
pub fn enumerate_partial_specs(n: usize, k: usize) -> Result<Vec<PartialMubSpec>> {
    check_partial_args(n, k)?;
    let per = 1usize << k;
    let mut out = Vec::with_capacity(partial_spec_count(n, k));
    for subset in subsets(n, k) {
        for basis_index in 0..=per {
            for state_index in 0..per {
                out.push(PartialMubSpec {
                    n,
                    k,
                    subset: subset.clone(),
                    basis_index,
                    state_index,
                });
            }
        }
    }
    Ok(out)
}

/// Embeds the MUB state on `spec.subset`, `|0>` elsewhere.
pub fn realize_partial_state(spec: &PartialMubSpec, set: &MubSet) -> Result<StateVector> {
    spec.validate()?;
    if set.num_qubits() != spec.k {
        return Err(Error::DimensionMismatch(format!(
            "spec has K = {} but the MUB set has {} qubits",
            spec.k,
            set.num_qubits()
        )));
    }
    if spec.basis_index >= set.num_bases() {
        return Err(Error::InvalidArgument(format!(
            "basis index {} but the set has {} bases",
            spec.basis_index,
            set.num_bases()
        )));
    }
    let local = set.state(spec.basis_index, spec.state_index);
    let n = spec.n;
    let k = spec.k;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for (l, a) in local.amplitudes().iter().enumerate() {
        let mut global = 0;
        for (pos, &q) in spec.subset.iter().enumerate() {
            if l & qubit_mask(k, pos + 1) != 0 {
                global |= qubit_mask(n, q);
            }
        }
        amps[global] = *a;
    }
    Ok(StateVector::from_raw(n, amps))
}

/// `U(theta0) |state>`.
pub fn shift_state(
    state: &StateVector,
    ansatz: &Ansatz,
    theta0: &ParameterVector,
) -> Result<StateVector> {
    ansatz.prepare(theta0, state)
}
