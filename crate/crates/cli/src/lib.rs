//! Command line front end for the [`tqsim`] library: run configuration,
//! named initial states, the subcommand drivers, and the delimited-text
//! output format.
//!
//! Everything the binary does goes through this crate's public functions,
//! so integration tests can drive the same code paths in process.

pub mod config;
pub mod output;
pub mod run;

pub use config::{CliError, CliResult, RunConfig};
