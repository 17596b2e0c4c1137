use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qstate::{Gate, StateVector};

/// Angles in radians.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ParameterVector(Vec<f64>);

impl ParameterVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl From<Vec<f64>> for ParameterVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Rotations applied to every qubit in every rotation layer, in this order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RotationAxes {
    /// `Ry` only: the Real Amplitudes ansatz.
    Y,
    /// `Ry` then `Rz`.
    YZ,
}

impl RotationAxes {
    pub fn count(self) -> usize {
        match self {
            RotationAxes::Y => 1,
            RotationAxes::YZ => 2,
        }
    }
}

impl FromStr for RotationAxes {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "Y" => Ok(RotationAxes::Y),
            "YZ" => Ok(RotationAxes::YZ),
            "" => Err(Error::InvalidArgument(
                "rotation axes must not be empty".into(),
            )),
            other => Err(Error::InvalidArgument(format!(
                "unsupported rotation axes {other:?} (expected Y or YZ)"
            ))),
        }
    }
}

impl fmt::Display for RotationAxes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RotationAxes::Y => "Y",
            RotationAxes::YZ => "YZ",
        })
    }
}

/// Hardware-efficient ansatz: `layers + 1` rotation layers separated by
/// CNOT chains `1 -> 2 -> ... -> n`, preceded by the inverse of the product
/// of all chains so that the all-zero parameter vector is the identity.
/// Parameters are ordered by layer, then qubit, then axis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ansatz {
    n: usize,
    layers: usize,
    axes: RotationAxes,
}

impl Ansatz {
    pub fn new(n: usize, layers: usize, axes: RotationAxes) -> Result<Self> {
        if n == 0 || n > crate::qstate::MAX_QUBITS {
            return Err(Error::OutOfRange {
                what: "ansatz qubit count",
                value: n.to_string(),
                bound: "1 <= n <= 12",
            });
        }
        if layers == 0 {
            return Err(Error::OutOfRange {
                what: "ansatz layers",
                value: "0".into(),
                bound: "layers >= 1",
            });
        }
        Ok(Self { n, layers, axes })
    }

    /// Single-layer `Ry` ansatz.
    pub fn real_amplitudes(n: usize) -> Result<Self> {
        Self::new(n, 1, RotationAxes::Y)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn axes(&self) -> RotationAxes {
        self.axes
    }

    pub fn parameter_count(&self) -> usize {
        self.n * self.axes.count() * (self.layers + 1)
    }

    pub fn check_params(&self, params: &ParameterVector) -> Result<()> {
        if params.len() != self.parameter_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} parameters for an ansatz with {}",
                params.len(),
                self.parameter_count()
            )));
        }
        Ok(())
    }

    fn chain(&self) -> impl DoubleEndedIterator<Item = Gate> + '_ {
        (1..self.n).map(|q| Gate::Cnot {
            control: q,
            target: q + 1,
        })
    }

    pub fn circuit(&self, params: &ParameterVector) -> Result<Vec<Gate>> {
        self.check_params(params)?;
        let entanglers = self.layers * self.n.saturating_sub(1);
        let mut gates = Vec::with_capacity(self.parameter_count() + 2 * entanglers);
        for _ in 0..self.layers {
            gates.extend(self.chain().rev());
        }
        let mut theta = params.as_slice().iter().copied();
        for layer in 0..=self.layers {
            for q in 1..=self.n {
                gates.push(Gate::ry(q, theta.next().expect("checked length")));
                if self.axes == RotationAxes::YZ {
                    gates.push(Gate::rz(q, theta.next().expect("checked length")));
                }
            }
            if layer < self.layers {
                gates.extend(self.chain());
            }
        }
        Ok(gates)
    }

    /// `U(params) |initial>`.
    pub fn prepare(&self, params: &ParameterVector, initial: &StateVector) -> Result<StateVector> {
        if initial.num_qubits() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{}-qubit ansatz on a {}-qubit state",
                self.n,
                initial.num_qubits()
            )));
        }
        self.check_params(params)?;
        let mut out = initial.clone();
        if params.as_slice().iter().any(|&t| t != 0.0) {
            out.apply_all(&self.circuit(params)?)?;
        }
        Ok(out)
    }
}
