//! Library surface of the `epictrl` binary. Everything the binary does
//! is reachable from here, so integration tests can call commands
//! in-process and unit-test the file formats directly.

pub mod args;
pub mod commands;
pub mod config;
pub mod csvio;
pub mod manifest;
pub mod svg;

pub use args::{Cli, Command};
pub use epictrl_core::{Error, Result};

pub fn run(cli: Cli) -> Result<()> {
    commands::run(cli)
}

/// Exit codes by failure class: 2 for bad configuration or input
/// schemas, 3 for runtime failures inside the model, 4 for I/O and
/// archive format failures. Argument parsing errors exit with 2 via
/// clap itself.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::ConfigInvalid(_) | Error::SchemaMismatch(_) => 2,
        Error::IntegrationDiverged { .. }
        | Error::CalibrationInfeasible(_)
        | Error::EpisodeFinished
        | Error::ShapeMismatch { .. }
        | Error::SizeMismatch(_)
        | Error::BufferTooSmall { .. } => 3,
        Error::Io(_) | Error::Format(_) => 4,
    }
}
