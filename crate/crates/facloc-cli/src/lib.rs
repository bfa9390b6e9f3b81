//! Command-line front end: instance files, run manifests and subcommands.

pub mod commands;
pub mod error;
pub mod io;
pub mod manifest;

pub use commands::{run, Cli};
pub use error::CliError;
