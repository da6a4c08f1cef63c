//! Command-line front end: TOML experiment descriptions in, CSV tables out.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

pub use commands::{
    cmd_evolve, cmd_gate, cmd_levels, cmd_resonances, cmd_sweep, cmd_tensor, run_command, Command, RunOptions,
};
pub use config::ExperimentConfig;
pub use error::CliError;
pub use table::ResultTable;
