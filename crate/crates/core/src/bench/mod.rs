//! Seeded, parallel Monte Carlo sweeps over the recovery algorithms.
//!
//! A sweep is the Cartesian product of grid points (`m`, `N`, `tau`, mean)
//! and trial indices. Each `(point, trial)` pair draws one instance from
//! seeds derived by [`TrialSeeds::derive`] and runs every selected
//! algorithm on it. Results are independent of the worker count.

pub mod config;
pub mod csv;
pub mod preset;
pub mod sweep;
pub mod trial;

pub use config::{parse_snr, ConfigOverrides, ExperimentConfig, Family, SnrValue, SweepPoint};
pub use csv::{emit_csv, error_log_path, write_csv, CSV_HEADER};
pub use preset::{preset, AnalysisTarget, Preset, FIG2_STEP, PRESET_NAMES};
pub use sweep::{run_sweep, run_sweep_to, AggregateRow, SweepResult, TrialFailure};
pub use trial::{
    fourier_instance, gaussian_instance, run_trial, run_trial_set, StageDiagnostics, TrialRecord,
    TrialSeeds,
};
