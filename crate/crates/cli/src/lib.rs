//! The `wkl` command-line front end, as a library so that the acceptance
//! harness can drive the same code paths as the binary.

pub mod args;
pub mod commands;
pub mod json;
pub mod report;
pub mod suites;

use std::io::Write;

use args::{Cli, Command};
use commands::Output;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] wkl_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

impl CliError {
    /// Malformed input is a usage error; everything the mathematics rejects
    /// (a point outside a cell, a divergent integral, …) is a domain error.
    pub fn exit_code(&self) -> i32 {
        use wkl_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Core(E::InvalidInput(_) | E::DimensionMismatch(_) | E::NonSquare(..) | E::NonFinite) => EXIT_USAGE,
            CliError::Core(_) => EXIT_DOMAIN,
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(Output, bool), CliError> {
    let (out, opts) = match &cli.command {
        Command::Decompose(a) => (commands::decompose(a)?, &a.output),
        Command::Roots(a) => (commands::roots(a.group)?, &a.output),
        Command::Verify(a) => (commands::verify(a)?, &a.output),
        Command::Plancherel(a) => (commands::plancherel(a)?, &a.output),
        Command::Whittaker(a) => (commands::whittaker(a)?, &a.output),
        Command::L2norm(a) => (commands::l2norm(a)?, &a.output),
        Command::SampleIntegrand(a) => (commands::sample_integrand(a)?, &a.output),
    };
    if let Some(path) = &opts.out {
        std::fs::write(path, &out.primary)?;
    } else {
        std::io::stdout().lock().write_all(out.primary.as_bytes())?;
    }
    Ok((out, opts.json))
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok((out, json_only)) => {
            if let (Some(h), false) = (&out.human, json_only) {
                eprint!("{h}");
            }
            if out.failed {
                EXIT_VERIFY
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("wkl: {e}");
            e.exit_code()
        }
    }
}
