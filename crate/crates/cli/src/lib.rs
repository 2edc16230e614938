//! Library side of the `socdiv` command-line tool. Each subcommand is a
//! `cmd_*` function taking its parsed arguments, so tests can drive the
//! pipeline without spawning processes.

pub mod dataset;
pub mod error;
pub mod generate;
pub mod io;
pub mod matching;
pub mod metrics;
pub mod regress;
pub mod reputation;

pub use error::{CliError, Result};

/// Output encoding for tabular results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}
