//! Config-driven experiment runner for `quasirisk`.

pub mod config;
pub mod run;
pub mod svg;

pub use config::{Diagnostic, ExperimentConfig, ExperimentKind, ExperimentSpec, Tolerances};
pub use run::{run, write_outputs, RunOptions, RunReport};
