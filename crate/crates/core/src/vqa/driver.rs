use serde::Serialize;

use crate::error::{Error, Result};
use crate::mub::{realize_partial_state, MubSet, PartialMubSpec};
use crate::pauli::Observable;
use crate::qstate::StateVector;
use crate::vqa::{
    fit_parameters_to_state, minimize, Ansatz, FitConfig, FitOutcome, OptimizationTrace,
    OptimizerConfig, ParameterVector,
};

/// How the first circuit of a VQE run is chosen.
#[derive(Clone, Debug)]
pub enum InitStrategy {
    /// Prepare the MUB state, then run the ansatz starting at `theta0`.
    ShiftedMub {
        spec: PartialMubSpec,
        theta0: ParameterVector,
    },
    /// Find ansatz parameters producing the MUB state from `|0...0>`. When the
    /// state is unreachable and `allow_fallback` is set, falls back to
    /// `ShiftedMub` at the zero vector.
    ParameterFit {
        spec: PartialMubSpec,
        allow_fallback: bool,
        fit: FitConfig,
    },
    /// Ansatz on `|0...0>` starting at the given parameters.
    RawParams { theta: ParameterVector },
    /// Ansatz on an arbitrary prepared state starting at the zero vector.
    Prepared { state: StateVector, label: String },
}

impl InitStrategy {
    pub fn shifted(spec: PartialMubSpec, parameter_count: usize) -> Self {
        InitStrategy::ShiftedMub {
            spec,
            theta0: ParameterVector::zeros(parameter_count),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            InitStrategy::ShiftedMub { spec, .. } => format!("shifted-mub:{}", spec.label()),
            InitStrategy::ParameterFit { spec, .. } => format!("parameter-fit:{}", spec.label()),
            InitStrategy::RawParams { .. } => "raw-params".into(),
            InitStrategy::Prepared { label, .. } => label.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VqeResult {
    pub init: String,
    pub trace: OptimizationTrace,
    pub final_energy: f64,
    pub final_params: ParameterVector,
    #[serde(skip)]
    pub final_state: StateVector,
    /// The state the ansatz acts on.
    #[serde(skip)]
    pub reference_state: StateVector,
    pub fell_back: bool,
    pub fit_fidelity: Option<f64>,
}

/// `<psi(theta)|H|psi(theta)>` with `psi(theta) = U(theta)|initial>`.
pub fn vqe_cost(
    ansatz: &Ansatz,
    params: &ParameterVector,
    obs: &Observable,
    initial: &StateVector,
) -> Result<f64> {
    obs.expectation(&ansatz.prepare(params, initial)?)
}

pub fn run_vqe(
    obs: &Observable,
    init: &InitStrategy,
    ansatz: &Ansatz,
    config: &OptimizerConfig,
    mubs: &MubSet,
) -> Result<VqeResult> {
    let n = obs.num_qubits();
    if ansatz.num_qubits() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}-qubit ansatz for a {}-qubit observable",
            ansatz.num_qubits(),
            n
        )));
    }
    let dim = ansatz.parameter_count();
    let mut fell_back = false;
    let mut fit_fidelity = None;
    let (reference, theta0) = match init {
        InitStrategy::ShiftedMub { spec, theta0 } => {
            ansatz.check_params(theta0)?;
            (realize(spec, n, mubs)?, theta0.clone())
        }
        InitStrategy::ParameterFit {
            spec,
            allow_fallback,
            fit,
        } => {
            let target = realize(spec, n, mubs)?;
            let outcome = fit_parameters_to_state(ansatz, &target, fit)?;
            fit_fidelity = Some(outcome.fidelity());
            match outcome {
                FitOutcome::Reached { params, .. } => (StateVector::zero(n)?, params),
                FitOutcome::Unreachable { best_fidelity, .. } => {
                    if !allow_fallback {
                        return Err(Error::Unreachable(best_fidelity));
                    }
                    fell_back = true;
                    (target, ParameterVector::zeros(dim))
                }
            }
        }
        InitStrategy::RawParams { theta } => {
            ansatz.check_params(theta)?;
            (StateVector::zero(n)?, theta.clone())
        }
        InitStrategy::Prepared { state, .. } => {
            if state.num_qubits() != n {
                return Err(Error::DimensionMismatch(format!(
                    "{}-qubit initial state for a {}-qubit observable",
                    state.num_qubits(),
                    n
                )));
            }
            (state.clone(), ParameterVector::zeros(dim))
        }
    };

    let cost = |theta: &[f64]| {
        vqe_cost(
            ansatz,
            &ParameterVector::new(theta.to_vec()),
            obs,
            &reference,
        )
        .expect("dimensions checked")
    };
    let trace = minimize(cost, theta0.as_slice(), config)?;
    let best = trace.best().clone();
    let final_state = ansatz.prepare(&best.params, &reference)?;
    Ok(VqeResult {
        init: init.describe(),
        final_energy: best.energy,
        final_params: best.params,
        final_state,
        reference_state: reference,
        trace,
        fell_back,
        fit_fidelity,
    })
}

fn realize(spec: &PartialMubSpec, n: usize, mubs: &MubSet) -> Result<StateVector> {
    if spec.n != n {
        return Err(Error::DimensionMismatch(format!(
            "spec for {} qubits on a {}-qubit observable",
            spec.n, n
        )));
    }
    realize_partial_state(spec, mubs)
}
