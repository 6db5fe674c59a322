//! File formats and command implementations behind the `quatfield` binary.

pub mod cli;
pub mod commands;
pub mod error;
pub mod formats;

pub use cli::{run, Outcome};
pub use error::CliError;
