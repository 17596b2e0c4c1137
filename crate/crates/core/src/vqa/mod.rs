//! Variational machinery: hardware-efficient ansatz, a derivative-free
//! trust-region optimizer with full evaluation traces, and the VQE driver.

mod ansatz;
mod driver;
mod fit;
mod optimizer;

pub use ansatz::{Ansatz, ParameterVector, RotationAxes};
pub use driver::{run_vqe, vqe_cost, InitStrategy, VqeResult};
pub use fit::{fit_parameters_to_state, FitConfig, FitOutcome};
pub use optimizer::{
    minimize, Evaluation, OptimizationTrace, OptimizerConfig, StepKind, Termination,
};
