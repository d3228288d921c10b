//! Command-line front end for `chordcolor`: subcommand dispatch, the
//! benchmark harness and SVG scatter plots.

pub mod app;
pub mod bench;
pub mod plot;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Core(#[from] chordcolor::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// A negative result: failed verification or no valid coloring.
    pub const NEGATIVE: i32 = 1;
    pub const USAGE: i32 = 2;
}

pub use app::run;
