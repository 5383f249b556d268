//! File formats, reports and the command-line front end for `schur-privacy`.

pub mod formats;
pub mod report;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use schur_privacy::{Error, DEFAULT_TOL, DEFAULT_ZERO_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_OBSTRUCTION: i32 = 3;
pub const EXIT_NOT_PRIVATE: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {msg}")]
    Parse { path: String, msg: String },
    #[error("invalid correlation matrix: {0}")]
    Invalid(Error),
    #[error("{0}")]
    Obstruction(Error),
    #[error("{0}")]
    Library(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonFinite { .. }
            | Error::NotHermitian { .. }
            | Error::DiagonalNotOne { .. }
            | Error::NotPsd { .. }
            | Error::Normalization { .. } => Self::Invalid(e),
            Error::Obstruction => Self::Obstruction(e),
            other => Self::Library(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io { .. } | Self::Parse { .. } | Self::Library(_) => EXIT_IO,
            Self::Invalid(_) => EXIT_INVALID,
            Self::Obstruction(_) => EXIT_OBSTRUCTION,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "schur-privacy", version, about = "Privacy analysis for Schur-product channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Hermiticity / PSD tolerance (also the |C_ij|^2 = 1 tolerance)
    #[arg(long, global = true, default_value_t = DEFAULT_TOL, value_parser = positive)]
    pub tol: f64,

    /// Entries with modulus at most this count as zero
    #[arg(long = "zero-tol", global = true, default_value_t = DEFAULT_ZERO_TOL, value_parser = positive)]
    pub zero_tol: f64,

    /// Seed for randomized tests
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Graphs, components, independence number and privacy summary of C
    Analyze {
        input: PathBuf,
        /// Tensor power used for the qubit yield
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        power: u32,
    },
    /// Certified private algebra for the N-th tensor power of the channel
    Construct {
        input: PathBuf,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        power: u32,
    },
    /// Check whether the channel privatises the span of an algebra file
    Verify { input: PathBuf, algebra: PathBuf },
    /// Emit G_C and UG_C
    Graph { input: PathBuf },
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be a positive number, got {s}"))
    }
}

pub(crate) fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Runs a parsed command line; returns the rendered output and exit code.
pub fn execute(cli: &Cli) -> Result<(String, i32), CliError> {
    match &cli.command {
        Command::Analyze { input, power } => report::analyze(cli, input, *power as usize),
        Command::Construct { input, power } => report::construct(cli, input, *power as usize),
        Command::Verify { input, algebra } => report::verify(cli, input, algebra),
        Command::Graph { input } => report::graph(cli, input),
    }
}

/// Entry point shared by the binary: parse, run, write, and map to an exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_IO } else { EXIT_OK };
        }
    };
    let (text, code) = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    };
    match written {
        Ok(()) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_IO
        }
    }
}
