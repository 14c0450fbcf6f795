//! Std companion to `qrg-core`: Cayley-table caches, seeded set generators,
//! the experiment harness with JSON/CSV reports, and the `qrg` CLI.

pub mod cache;
pub mod chu;
pub mod config;
pub mod experiments;
pub mod generate;
pub mod report;
pub mod seed;

pub use config::{run_config, RunOutcome};
pub use experiments::Env;
pub use generate::{generate_set, Base, GeneratorSpec};
pub use report::{ExperimentOutput, ExperimentReport};
