pub mod landscape;
pub mod mub;
pub mod problem;
pub mod vqe;
