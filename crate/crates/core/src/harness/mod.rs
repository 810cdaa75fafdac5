//! Batch experiment running: validated configurations, deterministic
//! per-trial seeding, stable CSV records, and aggregation.
//!
//! The flow is `ExperimentConfig` -> [`run_experiment`] -> `Vec<TrialRecord>`
//! -> [`write_csv`] / [`summarize`]. Configurations validate up front and
//! report every violated constraint at once; trials run in parallel yet
//! reproduce the sequential records exactly, because each trial's seed is a
//! pure function of the base seed and its record id.

mod config;
mod records;
mod runner;
mod spec;
mod summary;

pub use config::ExperimentConfig;
pub use records::{
    csv_bytes, read_csv, read_csv_file, write_csv, write_csv_file, TrialRecord, CSV_COLUMNS,
    CSV_SCHEMA_VERSION,
};
pub use runner::{
    run_experiment, run_trials, run_trials_sequential, trial_seed, TrialOutcome,
};
pub use spec::{
    AlgoSpec, BlackboxPreset, MutationSpec, ProblemSpec, RadiusSpec, SigmaSpec, ZSpec,
};
pub use summary::{summarize, GroupRow, SlopeFit, Summary, SLOPE_MIN_SIZES};
