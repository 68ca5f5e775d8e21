//! Library side of the `gwa-rep` command-line tool.

pub mod commands;
pub mod job;
pub mod sweep;

pub use commands::{run, Outcome};
pub use job::{CliError, CommandKind, JobSpec, OutputFormat};
