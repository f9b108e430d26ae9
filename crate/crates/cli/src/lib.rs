//! Command-line front end: argument parsing, the canonical run
//! configuration, and table rendering as JSON or CSV.

pub mod args;
pub mod commands;
pub mod config;
pub mod table;

use clap::Parser;
use pascal_charpoly::Error;

pub use args::{Cli, Cmd};
pub use config::{CommandKind, Format, LRange, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Exit status for a failed computation.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::MissingEntry(_) | Error::ChecksumMismatch { .. } | Error::MalformedCache { .. } => EXIT_IO,
        Error::Parse(_) | Error::InvalidParams(_) => EXIT_USAGE,
        _ => EXIT_COMPUTE,
    }
}

/// Parses `args` (program name first), runs the command, and returns the
/// rendered output or an exit code with its message.
pub fn execute<I, T>(args: I) -> Result<String, (i32, String)>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return Err((code, e.to_string()));
        }
    };
    let config = cli.command.config().map_err(|m| (EXIT_USAGE, format!("error: {m}\n")))?;
    let table = commands::run(&config)
        .map_err(|e| (exit_code(&e), format!("error: {}: {e}\n", config.command.name())))?;
    Ok(table.render(&config))
}
