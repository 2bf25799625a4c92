//! Command-line front-end for `stlrob`: batch evaluation, streaming monitoring,
//! episode metrics, semantics comparison and a stdio reward service.

pub mod args;
pub mod commands;
pub mod error;
pub mod serve;

pub use args::Cli;
pub use commands::run;
pub use error::{CliError, CliResult};
