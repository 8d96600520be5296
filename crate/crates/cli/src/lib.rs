//! `qwp` command-line verifier. [`execute`] runs one invocation and returns
//! the exit code with the exact stdout text, so the binary is a thin shell.

mod commands;
mod failure;
mod render;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{ExampleFile, RunOutput, TripleReport, Verdict};
pub use failure::{exit, CliError, ErrorBody};

/// Environment overrides consulted by [`execute`].
#[derive(Debug, Clone, Default)]
pub struct Env {
    /// Value of `QWP_TOL`, the default truncation tolerance.
    pub tol: Option<String>,
}

impl Env {
    pub fn from_process() -> Self {
        Env {
            tol: std::env::var("QWP_TOL").ok(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectKind {
    State,
    Predicate,
    Channel,
    Superop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    Grover,
    Coin,
    Bell,
}

#[derive(Debug, Parser)]
#[command(name = "qwp", version, about = "Weakest preconditions for quantum flow-chart programs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Truncation tolerance for loops and recursion [default: $QWP_TOL or 1e-10]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// Iteration cap for loops and recursion
    #[arg(long, global = true, default_value_t = qwp_core::tolerance::MAX_ITER)]
    pub max_iter: usize,
    /// Slack on eigenvalue bounds when validating inputs and outputs
    #[arg(long, global = true, allow_negative_numbers = true, default_value_t = qwp_core::tolerance::PSD_TOL)]
    pub psd_tol: f64,
    /// Seed for the randomized duality check
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the result here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weakest precondition of a program for a postcondition
    Wp {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        post: PathBuf,
        /// Accept any Hermitian postcondition and return its raw pullback
        #[arg(long)]
        observable: bool,
        /// Qubits of the ambient register for programs without inputs
        #[arg(long)]
        register: Option<usize>,
    },
    /// Run a program forward on a state
    Run {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        register: Option<usize>,
    },
    /// Check the triple `state ⊨_r wp(program)(post)`
    Check {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        post: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        threshold: f64,
        /// Random (state, predicate) pairs for the duality check
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        register: Option<usize>,
    },
    /// Validate a JSON object file
    Validate {
        #[arg(long, value_enum)]
        kind: ObjectKind,
        file: PathBuf,
    },
    /// Write a canonical example program with its companion files
    Example {
        #[arg(value_enum)]
        name: ExampleName,
        /// Register size (Grover search qubits, coin register qubits)
        #[arg(long)]
        n: Option<usize>,
        /// Marked element for Grover
        #[arg(long)]
        s: Option<usize>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

/// Outcome of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Response {
    pub code: i32,
    pub stdout: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn execute<I, T>(args: I, env: &Env) -> Response
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Response {
                    code: 0,
                    stdout: e.to_string(),
                };
            }
            return CliError::usage(e.render().to_string().trim_end()).response();
        }
    };
    match commands::dispatch(&cli, env) {
        Ok(r) => r,
        Err(e) => e.response(),
    }
}
