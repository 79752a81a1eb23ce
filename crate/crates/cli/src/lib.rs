//! Command-line front end for the `witten-psi` library.

pub mod args;
pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use witten_psi::error::{ParseError, PsiError, QuantityError, SpectralError};

pub use args::Cli;
pub use config::RunConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;
pub const EXIT_NO_CONVERGENCE: i32 = 4;
pub const EXIT_MISMATCH: i32 = 5;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Psi(#[from] PsiError),
    #[error(transparent)]
    Quantity(#[from] QuantityError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("no catalog entry named {0:?}")]
    UnknownEntry(String),
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match commands::dispatch(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
