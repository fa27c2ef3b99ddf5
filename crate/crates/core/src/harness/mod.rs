//! Scenario files, the closed-loop simulation, Monte-Carlo batches, error
//! metrics and result export.
//!
//! A scenario is a TOML file (see [`ScenarioConfig`]); unknown keys are
//! rejected. One trial merges three event streams on the IMU clock: IMU
//! samples drive the filter prediction, round-robin ranges drive the update,
//! and planner ticks move the mobile anchors using only the filter estimate.

mod export;
mod gradcheck;
mod metrics;
mod montecarlo;
mod run;
mod scenario;

pub use export::{
    comparison_summary, export_results, monte_carlo_summary, read_csv, trial_summary, CsvRow, DetTraceRow,
    ExportedFiles, DET_TRACE_FILE, SUMMARY_FILE, TRAJECTORY_FILE,
};
pub use gradcheck::{grad_check, GradCheckReport, ANCHOR_COUNT, BOX_SIZE, FD_STEP, GRAD_REL_TOL, STANDOFF, TRACE_TOL};
pub use metrics::{compute_rmse, mean_std, PoseSample, Rmse};
pub use montecarlo::{compare, monte_carlo, trial_seed, Comparison, MonteCarloSummary, Stat, TrialFailure};
pub use run::{run_scenario, run_trial, PlannerRecord, RunStats, StepRecord, TrialResult};
pub use scenario::{
    canonical_fixed_anchors, Canonical, Rates, ScenarioConfig, CANONICAL_HOVER, CANONICAL_MOBILE_START,
};
