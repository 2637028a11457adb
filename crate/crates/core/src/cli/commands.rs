use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use super::config::ExperimentConfig;
use super::output::Sink;
use super::{Cli, CliError, Command, Format, Mode};
use crate::codes::{CodeSpec, TrackedGroup};
use crate::faults::{fault_scan, FaultOptions, DEFAULT_FRACTIONS};
use crate::gates::Gate;
use crate::holonomy::{phase_distance, z_gate_holonomy};
use crate::linalg::{self, CMatrix, Limits};
use crate::pauli::PauliLetter;
use crate::programs::toffoli::{toffoli_context, toffoli_identity_check};
use crate::programs::{
    compile, geometric_part, verify, verify_finite_time, weight_audit, CompileOptions, GateSpec, PathProgram,
    SegmentWeight, VerifyMethod, VerifyOptions,
};
use crate::schedules::{sweep, Interpolation, Schedule};

const DEFAULT_CODE: &str = "bacon-shor-9";
const DEFAULT_CAT: usize = 4;
const DEFAULT_SEED: u64 = 7;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn sink(cfg: &ExperimentConfig, default: Format) -> Sink {
    Sink {
        format: cfg.out.unwrap_or(default),
        path: cfg.output.clone(),
    }
}

/// Register and target qubits a gate is compiled against.
pub fn gate_context(spec: &GateSpec, code: &CodeSpec, cat: usize) -> (TrackedGroup, Vec<usize>) {
    let n = code.n;
    match spec {
        GateSpec::Single(_) => (TrackedGroup::from_code(code), vec![0]),
        GateSpec::Cnot | GateSpec::CnotWith(_) | GateSpec::TransversalCnot => {
            (TrackedGroup::blocks_of(&[code.clone(), code.clone()]), vec![0, n])
        }
        GateSpec::Cond(_) => (TrackedGroup::blocks_of(&[CodeSpec::cat(cat), code.clone()]), vec![0, cat]),
        GateSpec::ViaIdentity(_) => (TrackedGroup::blocks_of(&[CodeSpec::cat(cat), code.clone()]), vec![cat, 0]),
        GateSpec::CatPrep => (TrackedGroup::from_code(&CodeSpec::fresh(cat)), (0..cat).collect()),
        GateSpec::CatParity => (TrackedGroup::blocks_of(&[CodeSpec::cat(2), CodeSpec::fresh(1)]), vec![0, 1, 2]),
        GateSpec::ToffoliOnCat => {
            let (g, q) = toffoli_context(cat);
            (g, q.to_vec())
        }
    }
}

fn compile_from(cfg: &ExperimentConfig, opts: &CompileOptions) -> Result<PathProgram, CliError> {
    let name = cfg.gate.as_deref().ok_or_else(|| usage("--gate is required"))?;
    let spec: GateSpec = name.parse().map_err(|e| usage(format!("{e}")))?;
    let code = CodeSpec::by_name(cfg.code.as_deref().unwrap_or(DEFAULT_CODE)).map_err(|e| usage(format!("{e}")))?;
    let cat = cfg.cat_size.unwrap_or(DEFAULT_CAT);
    if cat < 2 {
        return Err(usage("--cat-size must be at least 2"));
    }
    let (group, default_targets) = gate_context(&spec, &code, cat);
    let targets = cfg.targets.clone().unwrap_or(default_targets);
    if let Some(&q) = targets.iter().find(|&&q| q >= group.n_qubits) {
        return Err(usage(format!("target {q} outside a {}-qubit register", group.n_qubits)));
    }
    Ok(compile(&spec, &group, &targets, opts)?)
}

pub fn run(cli: &Cli) -> Result<bool, CliError> {
    let cfg = ExperimentConfig::resolve(cli)?;
    match &cli.command {
        Command::VerifyGate(_) => verify_gate(&cfg),
        Command::Holonomy(_) => holonomy(&cfg),
        Command::SweepAdiabatic(_) => sweep_adiabatic(&cfg),
        Command::FaultScan(_) => faults(&cfg),
        Command::WeightAudit(_) => audit(&cfg),
        Command::ToffoliCheck => toffoli(&cfg),
    }
}

#[derive(Serialize)]
struct VerifyRow {
    program: String,
    mode: Mode,
    fidelity: f64,
    method: Option<VerifyMethod>,
    qubits: usize,
    segments: usize,
    max_weight: usize,
    #[serde(rename = "T")]
    ratio: Option<f64>,
    max_diabatic: Option<f64>,
    tol: f64,
    pass: bool,
}

fn verify_gate(cfg: &ExperimentConfig) -> Result<bool, CliError> {
    let mode = cfg.mode.unwrap_or(Mode::Exact);
    let prog = compile_from(cfg, &CompileOptions::default())?;
    if let Some(path) = &cfg.save_program {
        std::fs::write(path, prog.to_json()?)?;
    }
    let vopts = VerifyOptions {
        seed: cfg.seed.unwrap_or(DEFAULT_SEED),
        ..VerifyOptions::default()
    };
    let max_weight = weight_audit(&prog).max_weight;
    let row = match mode {
        Mode::Exact => {
            let tol = cfg.tol.unwrap_or(1e-8);
            let v = verify(&prog, &vopts)?;
            VerifyRow {
                program: v.program,
                mode,
                fidelity: v.fidelity,
                method: Some(v.method),
                qubits: v.qubits,
                segments: v.segments,
                max_weight,
                ratio: None,
                max_diabatic: None,
                tol,
                pass: v.fidelity > 1.0 - tol,
            }
        }
        Mode::FiniteT => {
            let tol = cfg.tol.unwrap_or(1e-2);
            let ratio = cfg.ratio.ok_or_else(|| usage("--T is required in finite-T mode"))?;
            if !(ratio > 0.0) {
                return Err(usage(format!("--T must be positive, got {ratio}")));
            }
            let r = verify_finite_time(&prog, ratio, &vopts)?;
            VerifyRow {
                program: prog.name.clone(),
                mode,
                fidelity: r.fidelity,
                method: None,
                qubits: prog.support().len(),
                segments: prog.segments().count(),
                max_weight,
                ratio: Some(ratio),
                max_diabatic: Some(r.max_diabatic),
                tol,
                pass: r.fidelity > 1.0 - tol,
            }
        }
    };
    let pass = row.pass;
    sink(cfg, Format::Json).emit(&row, &[&row])?;
    Ok(pass)
}

/// Row-major `[re, im]` pairs.
fn rows_of(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

#[derive(Serialize)]
struct HolonomyOut {
    gate: String,
    interp: String,
    samples: usize,
    matrix: Vec<Vec<[f64; 2]>>,
    phases: Vec<f64>,
    /// Berry phases per segment and level (Z loop only).
    segment_berry_phases: Option<Vec<[f64; 2]>>,
    deviation: f64,
    tol: f64,
    pass: bool,
}

fn holonomy(cfg: &ExperimentConfig) -> Result<bool, CliError> {
    if cfg.out == Some(Format::Csv) {
        return Err(usage("holonomy output is a matrix; use --out json"));
    }
    let gate: Gate = cfg.gate.as_deref().unwrap_or("z").parse().map_err(|e| usage(format!("{e}")))?;
    let interp_name = cfg.interp.clone().unwrap_or_else(|| "linear".into());
    let interp = match interp_name.as_str() {
        "linear" => Interpolation::Linear,
        "trig" | "unitary" => Interpolation::Trig,
        other => return Err(usage(format!("unknown interpolation {other:?}"))),
    };
    let samples = cfg.samples.unwrap_or(2048);
    if samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let tol = cfg.tol.unwrap_or(1e-6);
    let out = if gate == Gate::Z {
        let r = z_gate_holonomy(&interp, samples, false)?;
        let want = [FRAC_PI_2, 3.0 * FRAC_PI_2];
        let deviation = phase_distance(r.phases[0], want[0])
            .max(phase_distance(r.phases[1], want[1]))
            .max(r.off_diagonal);
        HolonomyOut {
            gate: gate.to_string(),
            interp: interp_name,
            samples,
            matrix: rows_of(&r.matrix()),
            phases: r.phases.to_vec(),
            segment_berry_phases: Some(r.leg_phases),
            deviation,
            tol,
            pass: deviation < tol,
        }
    } else {
        if gate.arity() != 1 {
            return Err(usage(format!("holonomy covers single-qubit gates, got {gate}")));
        }
        let opts = CompileOptions {
            schedule: Schedule::new(interp, crate::schedules::Reparam::Identity, 1.0)?,
            weight_budget: None,
        };
        let group = TrackedGroup::from_code(&CodeSpec::fresh(1));
        let prog = compile(&GateSpec::Single(gate), &group, &[0], &opts)?;
        let u = geometric_part(&prog, false, &Limits::from_env())?.matrix;
        let phases = (0..u.nrows()).map(|i| u[(i, i)].arg()).collect();
        let deviation = linalg::phase_free_distance(&gate.matrix(), &u);
        HolonomyOut {
            gate: gate.to_string(),
            interp: interp_name,
            samples,
            matrix: rows_of(&u),
            phases,
            segment_berry_phases: None,
            deviation,
            tol,
            pass: deviation < tol,
        }
    };
    let pass = out.pass;
    sink(cfg, Format::Json).json(&out)?;
    Ok(pass)
}

fn sweep_adiabatic(cfg: &ExperimentConfig) -> Result<bool, CliError> {
    let name = cfg.schedule.clone().unwrap_or_else(|| "linear".into());
    Schedule::by_name(&name, 1.0).map_err(|e| usage(format!("{e}")))?;
    let ratios = cfg.ratios.clone().unwrap_or_else(|| vec![8.5, 17.0, 34.0, 70.0]);
    if let Some(r) = ratios.iter().find(|r| !(**r > 0.0)) {
        return Err(usage(format!("ratios must be positive, got {r}")));
    }
    let rows = sweep(&name, &ratios)?;
    sink(cfg, Format::Csv).emit(&rows, &rows)?;
    Ok(true)
}

#[derive(Serialize)]
struct FaultRow {
    qubit: usize,
    pauli: char,
    segment: usize,
    fraction: f64,
    fidelity: f64,
    verdict: bool,
}

#[derive(Serialize)]
struct FaultOut<'a> {
    program: String,
    events: usize,
    worst_fidelity: f64,
    failures: usize,
    pass: bool,
    rows: &'a [FaultRow],
}

fn faults(cfg: &ExperimentConfig) -> Result<bool, CliError> {
    let prog = compile_from(cfg, &CompileOptions::default())?;
    let qubits = cfg.qubits.clone().unwrap_or_else(|| (0..prog.n_qubits).collect());
    if let Some(&q) = qubits.iter().find(|&&q| q >= prog.n_qubits) {
        return Err(usage(format!("qubit {q} outside a {}-qubit register", prog.n_qubits)));
    }
    let paulis: Vec<PauliLetter> = match &cfg.paulis {
        None => PauliLetter::NONTRIVIAL.to_vec(),
        Some(list) => list
            .iter()
            .map(|s| match s.trim().to_ascii_uppercase().as_str() {
                "X" => Ok(PauliLetter::X),
                "Y" => Ok(PauliLetter::Y),
                "Z" => Ok(PauliLetter::Z),
                other => Err(usage(format!("unknown Pauli {other:?}"))),
            })
            .collect::<Result<_, _>>()?,
    };
    let fractions = cfg.fractions.clone().unwrap_or_else(|| DEFAULT_FRACTIONS.to_vec());
    if let Some(f) = fractions.iter().find(|f| !(0.0..=1.0).contains(*f)) {
        return Err(usage(format!("fractions must lie in [0, 1], got {f}")));
    }
    let opts = FaultOptions {
        tol: cfg.tol.unwrap_or(1e-6),
        seed: cfg.seed.unwrap_or(FaultOptions::default().seed),
        ..FaultOptions::default()
    };
    let scan = fault_scan(&prog, &qubits, &paulis, &fractions, &opts)?;
    let rows: Vec<FaultRow> = scan
        .reports
        .iter()
        .map(|r| {
            let e = r.events[0];
            FaultRow {
                qubit: e.qubit,
                pauli: e.pauli.as_char(),
                segment: e.segment,
                fraction: e.fraction,
                fidelity: r.logical_fidelity_after_recovery,
                verdict: r.verdict,
            }
        })
        .collect();
    let doc = FaultOut {
        program: scan.program.clone(),
        events: scan.events,
        worst_fidelity: scan.worst_fidelity,
        failures: scan.failures.len(),
        pass: scan.pass(),
        rows: &rows,
    };
    sink(cfg, Format::Csv).emit(&doc, &rows)?;
    Ok(scan.pass())
}

#[derive(Serialize)]
struct AuditOut<'a> {
    program: &'a str,
    max_weight: usize,
    max_blocks: usize,
    budget: usize,
    pass: bool,
    per_segment: &'a [SegmentWeight],
}

fn audit(cfg: &ExperimentConfig) -> Result<bool, CliError> {
    let prog = match &cfg.program {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("program {}: {e}", path.display())))?;
            PathProgram::from_json(&text).map_err(|e| usage(format!("program {}: {e}", path.display())))?
        }
        None => compile_from(cfg, &CompileOptions::default())?,
    };
    let budget = cfg.budget.unwrap_or(3);
    let a = weight_audit(&prog);
    let pass = a.check(budget).is_ok();
    let doc = AuditOut {
        program: &a.program,
        max_weight: a.max_weight,
        max_blocks: a.max_blocks,
        budget,
        pass,
        per_segment: &a.per_segment,
    };
    sink(cfg, Format::Json).emit(&doc, &a.per_segment)?;
    Ok(pass)
}

fn toffoli(cfg: &ExperimentConfig) -> Result<bool, CliError> {
    let r = toffoli_identity_check()?;
    sink(cfg, Format::Json).emit(&r, &[&r])?;
    Ok(r.pass)
}
