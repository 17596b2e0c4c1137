//! Discretized exhaustive search over mutually unbiased basis (MUB) states
//! for variational quantum cost landscapes.
//!
//! The crate builds complete MUB sets for up to three qubits, sweeps exact
//! expectation values of Pauli-sum observables over full and partial MUB
//! states, ranks the results as initial states, and runs VQE from them with
//! a derivative-free trust-region optimizer.

pub mod dqes;
pub mod error;
pub mod format;
pub mod mub;
pub mod pauli;
pub mod problems;
pub mod qstate;
pub mod vqa;

pub use dqes::{
    basis_statistics, basis_statistics_per_subset, rank_initial_states, run_full_dqes,
    run_partial_dqes, BasisSummary, LandscapeRecord, LandscapeReport,
};
pub use error::{Error, Result};
pub use mub::{
    build_full_mub_set, enumerate_partial_specs, realize_partial_state, shift_state,
    verify_mub_set, MubReport, MubSet, PartialMubSpec,
};
pub use pauli::{expectation_exact, expectation_sampled, Observable, Pauli, PauliString, Term};
pub use problems::{
    cut_value, exact_spectrum, maxcut_hamiltonian, molecule_fixture, random_graph, single_qubit_xy,
    transverse_field_ising, ExactSpectrumResult, GraphSpec,
};
pub use qstate::{Gate, StateVector};
pub use vqa::{
    fit_parameters_to_state, minimize, run_vqe, vqe_cost, Ansatz, FitConfig, FitOutcome,
    InitStrategy, OptimizationTrace, OptimizerConfig, ParameterVector, RotationAxes, Termination,
    VqeResult,
};

/// Version string embedded in output manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
