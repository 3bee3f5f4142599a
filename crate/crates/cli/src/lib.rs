//! Experiment runner: configuration, parallel Monte Carlo, data files and the
//! acceptance suite.

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod output;
pub mod pool;

pub use commands::{cmd_field, cmd_pair, cmd_particles, cmd_sweep, RunOutcome, SweepAxis, SweepTarget};
pub use config::{ExperimentConfig, Preset};
pub use pool::{default_workers, with_workers, WORKERS_ENV};
