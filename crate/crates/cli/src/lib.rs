//! Command-line driver for the three-boson contact model numerics: run
//! configuration, report emission, the study subcommands and the `verify`
//! property suite.

pub mod commands;
pub mod config;
pub mod report;
pub mod verify;

pub use commands::{run_command, Command, Outcome};
pub use config::RunConfig;
pub use report::{Cell, Table};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] tms_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{failed} of {total} properties failed")]
    Verify { failed: usize, total: usize },
    #[error("check failed: {0}")]
    Check(String),
}
