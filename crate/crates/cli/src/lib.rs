//! Experiment driver for the paraproduct toolkit: configuration, symbol
//! parsing, subcommands and deterministic report emission.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod symbol;
pub mod trials;

pub use config::{Format, RunConfig};
pub use error::{CliError, Result};
pub use report::{Check, Report, Table};
