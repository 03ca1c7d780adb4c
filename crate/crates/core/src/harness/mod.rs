//! Experiment configuration, parallel sweeps, CSV/JSON output and the CLI.

pub mod cli;
pub mod config;
pub mod output;
pub mod sweep;

pub use config::{ExperimentConfig, Mode};
pub use output::{compute_experiment, run_experiment, ExperimentOutput, WrittenFiles};
pub use sweep::{config_fingerprint, fingerprint, run_sweep_parallel, SweepResult, SweepRow};
