//! Command-line front end for `hypeigen-core`: run configuration, CSV and
//! JSON output, and the subcommands behind the `hypeigen` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod verify;

pub use error::CliError;
