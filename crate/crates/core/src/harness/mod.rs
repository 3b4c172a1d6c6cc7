//! Experiment drivers: convergence of tilted products towards a rank-one
//! matrix, and the randomized scan over products of many tilts.

mod conjecture;
mod converge;

pub use conjecture::{
    conjecture_scan, run_trial, trial_seed, trials_to_csv, trials_to_jsonl, ConjectureTrial, CANDIDATE_LABEL,
    SCAN_SPARSITY,
};
pub use converge::{converge_demo, fit_rate, ConvergenceReport, ERROR_FLOOR};
