use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::qstate::StateVector;
use crate::vqa::{minimize, Ansatz, OptimizerConfig, ParameterVector};

/// Minimum fidelity for a target to count as reachable.
pub const REACHABLE_FIDELITY: f64 = 1.0 - 1e-9;

#[derive(Clone, Debug)]
pub struct FitConfig {
    /// Number of random starting points (the all-zero vector is tried first
    /// and does not count).
    pub starts: usize,
    pub seed: u64,
    pub optimizer: OptimizerConfig,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            starts: 32,
            seed: 0,
            optimizer: OptimizerConfig {
                rho_init: 0.5,
                tol: 1e-10,
                max_evals: 4000,
                threshold: Some(1e-15),
            },
        }
    }
}

#[derive(Clone, Debug)]
pub enum FitOutcome {
    Reached {
        params: ParameterVector,
        fidelity: f64,
    },
    Unreachable {
        best_params: ParameterVector,
        best_fidelity: f64,
    },
}

impl FitOutcome {
    pub fn fidelity(&self) -> f64 {
        match self {
            FitOutcome::Reached { fidelity, .. } => *fidelity,
            FitOutcome::Unreachable { best_fidelity, .. } => *best_fidelity,
        }
    }

    pub fn params(&self) -> Option<&ParameterVector> {
        match self {
            FitOutcome::Reached { params, .. } => Some(params),
            FitOutcome::Unreachable { .. } => None,
        }
    }
}

/// Searches for `theta` with `|<target|U(theta)|0...0>|^2 >= 1 - 1e-9` by
/// multi-start minimization of the infidelity.
pub fn fit_parameters_to_state(
    ansatz: &Ansatz,
    target: &StateVector,
    config: &FitConfig,
) -> Result<FitOutcome> {
    if target.num_qubits() != ansatz.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "{}-qubit target for a {}-qubit ansatz",
            target.num_qubits(),
            ansatz.num_qubits()
        )));
    }
    let zero = StateVector::zero(ansatz.num_qubits())?;
    let infidelity = |theta: &[f64]| -> f64 {
        let psi = ansatz
            .prepare(&ParameterVector::new(theta.to_vec()), &zero)
            .expect("dimensions checked");
        1.0 - target.fidelity(&psi).expect("dimensions checked")
    };

    let dim = ansatz.parameter_count();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for start in 0..=config.starts {
        let theta0: Vec<f64> = if start == 0 {
            vec![0.0; dim]
        } else {
            (0..dim).map(|_| rng.random_range(-PI..PI)).collect()
        };
        let trace = minimize(infidelity, &theta0, &config.optimizer)?;
        let e = trace.best();
        if best.as_ref().is_none_or(|(_, f)| e.energy < *f) {
            best = Some((e.params.as_slice().to_vec(), e.energy));
        }
        if best.as_ref().is_some_and(|(_, f)| *f <= 1e-14) {
            break;
        }
    }
    let (params, infid) = best.expect("at least one start");
    let fidelity = 1.0 - infid;
    let params = ParameterVector::new(params);
    Ok(if fidelity >= REACHABLE_FIDELITY {
        FitOutcome::Reached { params, fidelity }
    } else {
        FitOutcome::Unreachable {
            best_params: params,
            best_fidelity: fidelity,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vqa::RotationAxes;
    use num_complex::Complex64;

    #[test]
    fn ansatz_output_is_reachable() {
        let a = Ansatz::new(2, 1, RotationAxes::YZ).unwrap();
        let theta_star = ParameterVector::new(vec![0.3, -1.1, 2.0, 0.4, -0.7, 1.3, 0.2, -2.5]);
        let target = a
            .prepare(&theta_star, &StateVector::zero(2).unwrap())
            .unwrap();
        let out = fit_parameters_to_state(&a, &target, &FitConfig::default()).unwrap();
        let FitOutcome::Reached { params, fidelity } = out else {
            panic!("unreachable: {out:?}")
        };
        assert!(fidelity >= REACHABLE_FIDELITY);
        let psi = a.prepare(&params, &StateVector::zero(2).unwrap()).unwrap();
        assert!(target.fidelity(&psi).unwrap() >= REACHABLE_FIDELITY);
    }

    #[test]
    fn computational_state_with_real_amplitudes() {
        let a = Ansatz::real_amplitudes(2).unwrap();
        let target = StateVector::basis(2, 0b01).unwrap();
        let out = fit_parameters_to_state(&a, &target, &FitConfig::default()).unwrap();
        assert!(matches!(out, FitOutcome::Reached { .. }), "{out:?}");
    }

    #[test]
    fn complex_state_unreachable_with_y_rotations() {
        let a = Ansatz::new(1, 1, RotationAxes::Y).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let target =
            StateVector::from_amplitudes(1, vec![Complex64::new(s, 0.0), Complex64::new(0.0, s)])
                .unwrap();
        let out = fit_parameters_to_state(&a, &target, &FitConfig::default()).unwrap();
        let FitOutcome::Unreachable { best_fidelity, .. } = out else {
            panic!("expected unreachable")
        };
        // Any real (a, b) gives |<+i|(a, b)>|^2 = (a^2 + b^2) / 2.
        assert!((best_fidelity - 0.5).abs() < 1e-9);
    }

    #[test]
    fn y_rotation_circuits_only_produce_real_amplitudes() {
        // Exhaustive grid over both angles of the 1-qubit Y ansatz.
        let a = Ansatz::new(1, 1, RotationAxes::Y).unwrap();
        let zero = StateVector::zero(1).unwrap();
        for i in 0..64 {
            for j in 0..64 {
                let t = ParameterVector::new(vec![i as f64 * 0.1, j as f64 * 0.1 - 3.2]);
                let psi = a.prepare(&t, &zero).unwrap();
                assert!(psi.amplitudes().iter().all(|z| z.im == 0.0));
            }
        }
    }
}
