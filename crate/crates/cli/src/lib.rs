//! Command-line front end: file formats, report layout and the `tresor`
//! subcommands.

pub mod commands;
pub mod error;
pub mod input;
pub mod render;
pub mod report;

pub use commands::{run, Cli};
pub use error::CliError;
