//! Library side of the `paramp` binary: config ingestion and the command
//! implementations.

pub mod commands;
pub mod config;
mod error;

pub use config::DesignConfig;
pub use error::{CliError, CliResult};
