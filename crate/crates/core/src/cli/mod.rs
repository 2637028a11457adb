//! Command-line front end: argument parsing, optional JSON config, and the
//! experiment subcommands.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::ExperimentConfig;

/// Exit status for passing runs.
pub const EXIT_PASS: i32 = 0;
/// Exit status when a check ran but failed, or the run hit a runtime error.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for bad arguments or configuration.
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    #[value(name = "finite-T", alias = "finite-t")]
    #[serde(rename = "finite-T", alias = "finite-t")]
    FiniteT,
}

#[derive(Debug, Parser)]
#[command(name = "holonome", version, about = "Adiabatic holonomic gate compiler and checker")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub out: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// JSON file with default values for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// More log output (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a gate and check it against its target unitary.
    VerifyGate(VerifyArgs),
    /// Holonomy of the Z-gate loop, or the geometric part of a catalog gate.
    Holonomy(HolonomyArgs),
    /// Diabatic error of the half-turn across durations.
    SweepAdiabatic(SweepArgs),
    /// Inject single Pauli faults and check recovery.
    FaultScan(FaultArgs),
    /// Hamiltonian weight of every segment of a program.
    WeightAudit(AuditArgs),
    /// Dense check of the Toffoli decomposition.
    ToffoliCheck,
}

#[derive(Debug, Args, Default)]
pub struct GateArgs {
    /// Gate spec, e.g. `z`, `cnot`, `cond:x`, `cat-prep`, `toffoli-on-cat`.
    #[arg(long)]
    pub gate: Option<String>,
    /// `bacon-shor-9`, `four-two-two`, `trivial`, `cat-<m>` or `file:<path>`.
    #[arg(long)]
    pub code: Option<String>,
    /// Register qubits the gate acts on; defaults depend on the gate.
    #[arg(long, value_delimiter = ',')]
    pub targets: Option<Vec<usize>>,
    #[arg(long)]
    pub cat_size: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub gate: GateArgs,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Duration of a two-leg half turn in units of `T_d` (finite-T mode).
    #[arg(long = "T")]
    pub ratio: Option<f64>,
    /// Allowed infidelity.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Also save the compiled program as JSON.
    #[arg(long)]
    pub save_program: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HolonomyArgs {
    #[arg(long)]
    pub gate: Option<String>,
    /// `linear` or `trig`.
    #[arg(long)]
    pub interp: Option<String>,
    /// Frames per segment.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// `linear`, `trig` or `bump`.
    #[arg(long)]
    pub schedule: Option<String>,
    /// Values of `T_h / T_d`.
    #[arg(long, value_delimiter = ',')]
    pub ratios: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct FaultArgs {
    #[command(flatten)]
    pub gate: GateArgs,
    /// Qubits to inject on; defaults to the whole register.
    #[arg(long, value_delimiter = ',')]
    pub qubits: Option<Vec<usize>>,
    /// Subset of `X,Y,Z`.
    #[arg(long, value_delimiter = ',')]
    pub paulis: Option<Vec<String>>,
    /// Injection points within each segment.
    #[arg(long, value_delimiter = ',')]
    pub fractions: Option<Vec<f64>>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Program JSON file; otherwise the gate is compiled.
    #[arg(long)]
    pub program: Option<PathBuf>,
    #[command(flatten)]
    pub gate: GateArgs,
    /// Largest allowed Pauli weight.
    #[arg(long)]
    pub budget: Option<usize>,
}

/// Failure modes of a run, mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(crate::Error),
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Runtime(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
}

/// Parse arguments, run the command and return the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    init_logging(cli.common.verbose);
    match commands::run(&cli) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("try `holonome --help`");
            EXIT_USAGE
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e}");
            EXIT_FAIL
        }
    }
}
