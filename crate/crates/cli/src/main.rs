//! `laurent`: compute recurrence terms and run the Laurent-phenomenon
//! verifiers from the command line.
//!
//! Exit codes: 0 success or pass, 1 a computation finding (fail,
//! inconclusive, not Laurent), 2 bad input.

/// Printing that tolerates a closed stdout, e.g. when piped into `head`.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

mod catalog;
mod compute;
mod record;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use laurent::recurrences::{lookup, RecurrenceSpec};
use laurent::{Definition, DEFAULT_TRIALS};

#[derive(Parser)]
#[command(name = "laurent", version, about = "Laurent phenomenon computations and certificates")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Common {
    /// Seed for randomized coprimality checks and random initial values.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Evaluation trials per coprimality check.
    #[arg(long, global = true, default_value_t = DEFAULT_TRIALS)]
    pub trials: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Compute terms of a recurrence, symbolically or at exact rational values.
    Compute(compute::ComputeArgs),
    /// Run a verifier and print its certificate.
    #[command(subcommand)]
    Verify(verify::VerifyCommand),
    /// List the built-in recurrences, or print one as a definition file.
    Catalog(catalog::CatalogArgs),
}

/// A catalog name or a definition file.
#[derive(Args, Clone, Debug)]
#[group(required = true, multiple = false)]
pub struct Target {
    /// Catalog name (see `laurent catalog`).
    pub name: Option<String>,
    /// Definition file (`.rec`, TOML).
    #[arg(long)]
    pub file: Option<PathBuf>,
}

impl Target {
    pub fn label(&self) -> String {
        match (&self.name, &self.file) {
            (Some(n), _) => n.clone(),
            (None, Some(f)) => f.display().to_string(),
            (None, None) => unreachable!("clap requires one of name and --file"),
        }
    }

    pub fn definition(&self) -> Result<Definition, CliError> {
        match (&self.name, &self.file) {
            (Some(name), _) => Ok(Definition::from_spec(&lookup(name).map_err(input)?)),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                Definition::from_toml(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
            }
            (None, None) => unreachable!("clap requires one of name and --file"),
        }
    }

    pub fn spec(&self) -> Result<RecurrenceSpec, CliError> {
        match &self.name {
            Some(name) => lookup(name).map_err(input),
            None => self.definition()?.to_spec().map_err(input),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Malformed flags, files or names.
    Input(String),
    /// The computation itself stopped, e.g. at the size guard or a zero term.
    Finding(String),
}

pub fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

pub fn finding(e: impl std::fmt::Display) -> CliError {
    CliError::Finding(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Compute(args) => compute::run(args, &cli.common),
        Command::Verify(cmd) => verify::run(cmd, &cli.common),
        Command::Catalog(args) => catalog::run(args, &cli.common),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Finding(msg)) => {
            eprintln!("laurent: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("laurent: error: {msg}");
            ExitCode::from(2)
        }
    }
}
