use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Cli, CliError, Command, Format, GateArgs, Mode};

/// Every flag of every subcommand; a config file may set any of them and
/// command-line flags take precedence.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Option<String>,
    pub gate: Option<String>,
    pub code: Option<String>,
    pub targets: Option<Vec<usize>>,
    pub cat_size: Option<usize>,
    pub mode: Option<Mode>,
    #[serde(rename = "T")]
    pub ratio: Option<f64>,
    pub tol: Option<f64>,
    pub interp: Option<String>,
    pub samples: Option<usize>,
    pub schedule: Option<String>,
    pub ratios: Option<Vec<f64>>,
    pub qubits: Option<Vec<usize>>,
    pub paulis: Option<Vec<String>>,
    pub fractions: Option<Vec<f64>>,
    pub budget: Option<usize>,
    pub program: Option<PathBuf>,
    pub save_program: Option<PathBuf>,
    pub out: Option<Format>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
}

macro_rules! overlay {
    ($top:expr, $base:expr, $($f:ident),*) => {
        ExperimentConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    /// Fields of `self`, falling back to `base`.
    pub fn or(self, base: ExperimentConfig) -> ExperimentConfig {
        overlay!(
            self, base, command, gate, code, targets, cat_size, mode, ratio, tol, interp, samples, schedule, ratios,
            qubits, paulis, fractions, budget, program, save_program, out, output, seed
        )
    }

    fn with_gate(mut self, g: &GateArgs) -> Self {
        self.gate = g.gate.clone();
        self.code = g.code.clone();
        self.targets = g.targets.clone();
        self.cat_size = g.cat_size;
        self
    }

    /// The flags given on the command line.
    pub fn from_cli(cli: &Cli) -> Self {
        let c = &cli.common;
        let base = ExperimentConfig {
            command: Some(command_name(&cli.command).to_string()),
            out: c.out,
            output: c.output.clone(),
            seed: c.seed,
            ..Default::default()
        };
        match &cli.command {
            Command::VerifyGate(a) => ExperimentConfig {
                mode: a.mode,
                ratio: a.ratio,
                tol: a.tol,
                save_program: a.save_program.clone(),
                ..base
            }
            .with_gate(&a.gate),
            Command::Holonomy(a) => ExperimentConfig {
                gate: a.gate.clone(),
                interp: a.interp.clone(),
                samples: a.samples,
                tol: a.tol,
                ..base
            },
            Command::SweepAdiabatic(a) => ExperimentConfig {
                schedule: a.schedule.clone(),
                ratios: a.ratios.clone(),
                ..base
            },
            Command::FaultScan(a) => ExperimentConfig {
                qubits: a.qubits.clone(),
                paulis: a.paulis.clone(),
                fractions: a.fractions.clone(),
                tol: a.tol,
                ..base
            }
            .with_gate(&a.gate),
            Command::WeightAudit(a) => ExperimentConfig {
                program: a.program.clone(),
                budget: a.budget,
                ..base
            }
            .with_gate(&a.gate),
            Command::ToffoliCheck => base,
        }
    }

    /// Command-line flags over the optional config file.
    pub fn resolve(cli: &Cli) -> Result<Self, CliError> {
        let flags = Self::from_cli(cli);
        let cfg = match &cli.common.config {
            None => flags,
            Some(path) => {
                let file = Self::load(path)?;
                if let (Some(a), Some(b)) = (&file.command, &flags.command) {
                    if a != b {
                        return Err(CliError::Usage(format!("config is for command {a:?}, running {b:?}")));
                    }
                }
                flags.or(file)
            }
        };
        if let Some(t) = cfg.tol {
            if !(t > 0.0) {
                return Err(CliError::Usage(format!("tolerance must be positive, got {t}")));
            }
        }
        Ok(cfg)
    }
}

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::VerifyGate(_) => "verify-gate",
        Command::Holonomy(_) => "holonomy",
        Command::SweepAdiabatic(_) => "sweep-adiabatic",
        Command::FaultScan(_) => "fault-scan",
        Command::WeightAudit(_) => "weight-audit",
        Command::ToffoliCheck => "toffoli-check",
    }
}
