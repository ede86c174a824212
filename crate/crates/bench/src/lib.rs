//! Desk-scale stress protocol for `spcauchy-core`: latent-step timing with a
//! finite-difference gradient probe, the robustness grid, the hybrid-rule
//! error sweep, and the quick self-test used by the CLI.

pub mod harness;
pub mod selftest;
pub mod sweep;

pub use harness::{
    mean_total_seconds, run_latent_step_bench, run_robustness_grid, success_counts, BenchConfig,
    BenchRecord, FailureKind, GRID_DIMS, GRID_METHODS, GRID_RHOS, LATENT_STEP_DIMS,
};
pub use selftest::{run_selftest, CheckOutcome};
pub use sweep::{run_error_sweep, ErrorSweepRow};
