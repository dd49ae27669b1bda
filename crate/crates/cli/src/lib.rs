//! Library surface of the experiment runner, split out so integration
//! tests can drive configs and the dispatcher directly.

pub mod config;
pub mod error;
pub mod presets;
pub mod runner;

pub use config::{ExperimentConfig, ExperimentKind};
pub use error::CliError;
pub use runner::{run, RunOutcome};
