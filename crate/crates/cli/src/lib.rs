//! Command-line front end for the `radcomp` solvers.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;

pub use config::{Format, RunConfig};
pub use error::CliError;
