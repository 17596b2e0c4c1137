//! Dense statevectors and gate application.
//!
//! Basis labels follow the ket convention `|b1 b2 ... bn>`: qubit 1 is the
//! leftmost symbol and the most significant bit of the amplitude index, so
//! qubit `k` of an `n`-qubit register lives at bit `n - k`.

use num_complex::Complex64;
use std::fmt;

use crate::error::{Error, Result};

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 12;

const NORM_TOL: f64 = 1e-12;
const UNITARY_TOL: f64 = 1e-10;

pub type Matrix2 = [[Complex64; 2]; 2];

#[derive(Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::OutOfRange {
            what: "qubit count",
            value: n.to_string(),
            bound: "1 <= n <= 12",
        });
    }
    Ok(())
}

/// Bit mask selecting 1-based qubit `k` in an `n`-qubit index.
#[inline]
pub(crate) fn qubit_mask(n: usize, k: usize) -> usize {
    1 << (n - k)
}

impl StateVector {
    /// `|0...0>` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    /// Computational basis state `|index>`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::OutOfRange {
                what: "basis index",
                value: index.to_string(),
                bound: "index < 2^n",
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Wraps amplitudes, checking length and unit norm.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_qubits(n)?;
        if amps.len() != 1 << n {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for {} qubits (expected {})",
                amps.len(),
                n,
                1usize << n
            )));
        }
        let state = Self { n, amps };
        let dev = (state.norm_sqr() - 1.0).abs();
        if dev > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "norm deviates from 1 by {dev:.3e}"
            )));
        }
        Ok(state)
    }

    /// Scales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(n: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        check_qubits(n)?;
        if amps.len() != 1 << n {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for {} qubits",
                amps.len(),
                n
            )));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n, amps })
    }

    /// Haar-random state from normalized complex Gaussian amplitudes.
    pub fn haar_random<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        use rand_distr::StandardNormal;
        check_qubits(n)?;
        let amps = (0..1usize << n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::normalized(n, amps)
    }

    pub(crate) fn from_raw(n: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n);
        Self { n, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "inner product of {}-qubit and {}-qubit states",
                self.n, other.n
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// `self ⊗ other` with `self`'s qubits first.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.n + other.n;
        if n > MAX_QUBITS {
            return Err(Error::OutOfRange {
                what: "combined qubit count",
                value: n.to_string(),
                bound: "n <= 12",
            });
        }
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(StateVector { n, amps })
    }

    /// Applies `gate` in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.check_fits(self.n)?;
        match gate {
            Gate::Single { target, matrix } => {
                let mask = qubit_mask(self.n, *target);
                for i in 0..self.amps.len() {
                    if i & mask == 0 {
                        let j = i | mask;
                        let (a0, a1) = (self.amps[i], self.amps[j]);
                        self.amps[i] = matrix[0][0] * a0 + matrix[0][1] * a1;
                        self.amps[j] = matrix[1][0] * a0 + matrix[1][1] * a1;
                    }
                }
            }
            Gate::Cnot { control, target } => {
                let cm = qubit_mask(self.n, *control);
                let tm = qubit_mask(self.n, *target);
                for i in 0..self.amps.len() {
                    if i & cm != 0 && i & tm == 0 {
                        self.amps.swap(i, i | tm);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a Gate>) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.apply(g))
    }

    /// Bloch vector `(<X>, <Y>, <Z>)` of a single-qubit state.
    pub fn bloch(&self) -> Result<[f64; 3]> {
        if self.n != 1 {
            return Err(Error::DimensionMismatch(format!(
                "Bloch coordinates need a 1-qubit state, got {} qubits",
                self.n
            )));
        }
        let (a, b) = (self.amps[0], self.amps[1]);
        let cross = a.conj() * b;
        Ok([2.0 * cross.re, 2.0 * cross.im, a.norm_sqr() - b.norm_sqr()])
    }

    /// Equality up to global phase: `|<a|b>| = 1` within `tol`.
    pub fn approx_eq_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        self.inner(other)
            .map(|z| (z.norm() - 1.0).abs() < tol)
            .unwrap_or(false)
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StateVector")
            .field("n", &self.n)
            .field("amps", &self.amps)
            .finish()
    }
}

pub fn zero_state(n: usize) -> Result<StateVector> {
    StateVector::zero(n)
}

pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    a.inner(b)
}

pub fn tensor_product(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    a.tensor(b)
}

pub fn bloch_coordinates(state: &StateVector) -> Result<[f64; 3]> {
    state.bloch()
}

/// A circuit gate. Qubit indices are 1-based.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    Single { target: usize, matrix: Matrix2 },
    Cnot { control: usize, target: usize },
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Gate {
    /// Single-qubit gate from an arbitrary matrix; rejects non-unitary input.
    pub fn single(target: usize, matrix: Matrix2) -> Result<Self> {
        if target == 0 {
            return Err(Error::InvalidArgument("qubit indices are 1-based".into()));
        }
        let dev = unitarity_deviation(&matrix);
        if dev.is_nan() || dev > UNITARY_TOL {
            return Err(Error::NonUnitary(dev));
        }
        Ok(Gate::Single { target, matrix })
    }

    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        if control == 0 || target == 0 {
            return Err(Error::InvalidArgument("qubit indices are 1-based".into()));
        }
        if control == target {
            return Err(Error::InvalidArgument(format!(
                "CNOT control and target are both qubit {control}"
            )));
        }
        Ok(Gate::Cnot { control, target })
    }

    // Fixed gates below are unitary by construction.

    pub fn h(target: usize) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Gate::Single {
            target,
            matrix: [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]],
        }
    }

    pub fn x(target: usize) -> Self {
        Gate::Single {
            target,
            matrix: [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        }
    }

    pub fn s(target: usize) -> Self {
        Gate::Single {
            target,
            matrix: [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]],
        }
    }

    pub fn sdg(target: usize) -> Self {
        Gate::Single {
            target,
            matrix: [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, -1.0)]],
        }
    }

    /// `exp(-i theta Y / 2)`.
    pub fn ry(target: usize, theta: f64) -> Self {
        let (s, co) = (theta / 2.0).sin_cos();
        Gate::Single {
            target,
            matrix: [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]],
        }
    }

    /// `exp(-i theta Z / 2)`.
    pub fn rz(target: usize, theta: f64) -> Self {
        let (s, co) = (theta / 2.0).sin_cos();
        Gate::Single {
            target,
            matrix: [[c(co, -s), c(0.0, 0.0)], [c(0.0, 0.0), c(co, s)]],
        }
    }

    pub fn targets(&self) -> Vec<usize> {
        match self {
            Gate::Single { target, .. } => vec![*target],
            Gate::Cnot { control, target } => vec![*control, *target],
        }
    }

    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::Single { target, matrix } => Gate::Single {
                target: *target,
                matrix: [
                    [matrix[0][0].conj(), matrix[1][0].conj()],
                    [matrix[0][1].conj(), matrix[1][1].conj()],
                ],
            },
            Gate::Cnot { .. } => self.clone(),
        }
    }

    fn check_fits(&self, n: usize) -> Result<()> {
        match self.targets().into_iter().find(|&q| q == 0 || q > n) {
            Some(q) => Err(Error::OutOfRange {
                what: "gate qubit index",
                value: q.to_string(),
                bound: "1 <= index <= n",
            }),
            None => Ok(()),
        }
    }
}

/// Max entrywise deviation of `U^† U` from the identity.
fn unitarity_deviation(m: &Matrix2) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let v: Complex64 = (0..2).map(|k| m[k][i].conj() * m[k][j]).sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            let dev = (v - expect).norm();
            worst = if dev.is_nan() {
                f64::NAN
            } else {
                worst.max(dev)
            };
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn amps_close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < tol)
    }

    fn real(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| c(x, 0.0)).collect()
    }

    #[test]
    fn zero_state_examples() {
        assert_eq!(zero_state(1).unwrap().amplitudes(), real(&[1.0, 0.0]));
        assert_eq!(
            zero_state(2).unwrap().amplitudes(),
            real(&[1.0, 0.0, 0.0, 0.0])
        );
        let err = zero_state(13).unwrap_err().to_string();
        assert!(err.contains("n <= 12"), "{err}");
        assert!(zero_state(0).is_err());
    }

    #[test]
    fn gate_examples() {
        let plus = apply_gate(&zero_state(1).unwrap(), &Gate::h(1)).unwrap();
        assert!(amps_close(
            plus.amplitudes(),
            &real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]),
            1e-15
        ));

        let s10 = StateVector::basis(2, 0b10).unwrap();
        let out = apply_gate(&s10, &Gate::cnot(1, 2).unwrap()).unwrap();
        assert_eq!(out, StateVector::basis(2, 0b11).unwrap());

        let out = apply_gate(&zero_state(2).unwrap(), &Gate::x(2)).unwrap();
        assert_eq!(out.amplitudes(), real(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn gate_errors() {
        let bad = [[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(matches!(Gate::single(1, bad), Err(Error::NonUnitary(_))));
        assert!(Gate::cnot(2, 2).is_err());
        let err = apply_gate(&zero_state(2).unwrap(), &Gate::x(3)).unwrap_err();
        assert!(matches!(err, Error::OutOfRange { .. }));
    }

    #[test]
    fn inner_product_examples() {
        let z0 = zero_state(1).unwrap();
        let z1 = StateVector::basis(1, 1).unwrap();
        let plus = apply_gate(&z0, &Gate::h(1)).unwrap();
        assert!((inner_product(&z0, &z0).unwrap() - 1.0).norm() < 1e-15);
        assert!(inner_product(&z0, &z1).unwrap().norm() < 1e-15);
        assert!(
            (inner_product(&z0, &plus).unwrap().norm() - std::f64::consts::FRAC_1_SQRT_2).abs()
                < 1e-8
        );
        assert!(inner_product(&z0, &zero_state(2).unwrap()).is_err());
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_first_argument() {
        let a = StateVector::from_amplitudes(1, vec![c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let b = zero_state(1).unwrap();
        assert!((a.inner(&b).unwrap() - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn tensor_examples() {
        let z0 = zero_state(1).unwrap();
        let z1 = StateVector::basis(1, 1).unwrap();
        let plus = apply_gate(&z0, &Gate::h(1)).unwrap();
        assert_eq!(
            tensor_product(&z0, &z1).unwrap().amplitudes(),
            real(&[0.0, 1.0, 0.0, 0.0])
        );
        assert!(amps_close(
            tensor_product(&plus, &z0).unwrap().amplitudes(),
            &real(&[FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0]),
            1e-15
        ));
        assert_eq!(
            tensor_product(&zero_state(2).unwrap(), &z0).unwrap(),
            zero_state(3).unwrap()
        );
        assert!(tensor_product(&zero_state(6).unwrap(), &zero_state(7).unwrap()).is_err());
    }

    #[test]
    fn bloch_examples() {
        let s = FRAC_1_SQRT_2;
        let cases = [
            (vec![c(1.0, 0.0), c(0.0, 0.0)], [0.0, 0.0, 1.0]),
            (vec![c(s, 0.0), c(-s, 0.0)], [-1.0, 0.0, 0.0]),
            (vec![c(s, 0.0), c(0.0, s)], [0.0, 1.0, 0.0]),
        ];
        for (amps, expect) in cases {
            let b = bloch_coordinates(&StateVector::from_amplitudes(1, amps).unwrap()).unwrap();
            for k in 0..3 {
                assert!((b[k] - expect[k]).abs() < 1e-12, "{b:?} vs {expect:?}");
            }
        }
        assert!(bloch_coordinates(&zero_state(2).unwrap()).is_err());
    }

    #[test]
    fn from_amplitudes_checks_norm_and_length() {
        assert!(StateVector::from_amplitudes(1, real(&[1.0, 1.0])).is_err());
        assert!(StateVector::from_amplitudes(2, real(&[1.0, 0.0])).is_err());
        assert!(StateVector::normalized(1, real(&[0.0, 0.0])).is_err());
    }

    #[test]
    fn ry_pi_flips_zero() {
        let out = apply_gate(&zero_state(1).unwrap(), &Gate::ry(1, PI)).unwrap();
        assert!(out.approx_eq_up_to_phase(&StateVector::basis(1, 1).unwrap(), 1e-12));
    }

    fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
        let single = (1..=n, 0usize..6, -PI..PI).prop_map(|(q, kind, t)| match kind {
            0 => Gate::h(q),
            1 => Gate::x(q),
            2 => Gate::s(q),
            3 => Gate::sdg(q),
            4 => Gate::ry(q, t),
            _ => Gate::rz(q, t),
        });
        let cnot = (1..=n, 1..=n)
            .prop_filter("distinct", |(a, b)| a != b)
            .prop_map(|(a, b)| Gate::cnot(a, b).unwrap());
        prop_oneof![3 => single, 1 => cnot]
    }

    proptest! {
        #[test]
        fn norm_preserved_and_adjoint_round_trips(
            gates in prop::collection::vec(arb_gate(4), 1..40),
            start in 0usize..16,
        ) {
            let initial = StateVector::basis(4, start).unwrap();
            let mut s = initial.clone();
            s.apply_all(&gates).unwrap();
            prop_assert!((s.norm_sqr().sqrt() - 1.0).abs() < 1e-12);
            for g in gates.iter().rev() {
                s.apply(&g.adjoint()).unwrap();
            }
            prop_assert!(amps_close(s.amplitudes(), initial.amplitudes(), 1e-10));
        }

        #[test]
        fn x_flips_the_expected_index_bit(n in 1usize..=6, k in 1usize..=6, i in 0usize..64) {
            prop_assume!(k <= n && i < (1 << n));
            let out = apply_gate(&StateVector::basis(n, i).unwrap(), &Gate::x(k)).unwrap();
            prop_assert_eq!(out, StateVector::basis(n, i ^ (1 << (n - k))).unwrap());
        }
    }
}
