//! Checking compiled programs against their intended unitary.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{PathProgram, ProgramStep};
use crate::codes::GroupOp;
use crate::error::{Error, Result};
use crate::evolution::{evolve_segment, exact_adiabatic_transport, EvolutionOptions, LocalUnitary};
use crate::holonomy::{self, EigenFramePath};
use crate::linalg::{self, CMatrix, Limits, C64};
use crate::schedules::DIABATIC_TIME;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMethod {
    /// `|Tr(T^dagger U)| / dim` on the union support.
    Dense,
    /// `|sum_k <T psi_k|U psi_k>| / K` over seeded random states.
    StateVector,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    pub limits: Limits,
    /// Random states for the state-vector estimate.
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            limits: Limits::from_env(),
            samples: 4,
            seed: 7,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub program: String,
    pub fidelity: f64,
    pub method: VerifyMethod,
    pub qubits: usize,
    pub segments: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteTimeReport {
    /// Duration of a two-leg half turn in units of `T_d`.
    pub ratio: f64,
    pub fidelity: f64,
    /// Largest per-segment leakage.
    pub max_diabatic: f64,
}

fn union_support(lists: &[&[LocalUnitary]]) -> Vec<usize> {
    let mut s: Vec<usize> = lists.iter().flat_map(|l| l.iter().flat_map(|u| u.qubits.clone())).collect();
    s.sort_unstable();
    s.dedup();
    s
}

fn compose_dense(units: &[LocalUnitary], support: &[usize]) -> CMatrix {
    units.iter().fold(linalg::eye(1 << support.len()), |acc, u| u.on(support) * acc)
}

fn apply_all(state: &mut [C64], units: &[LocalUnitary], support: &[usize]) {
    for u in units {
        let pos: Vec<usize> = u.qubits.iter().map(|q| support.iter().position(|s| s == q).unwrap()).collect();
        linalg::apply_local(state, support.len(), &pos, &u.matrix);
    }
}

/// Fidelity up to global phase between two products of local operators.
pub fn compare(realized: &[LocalUnitary], target: &[LocalUnitary], opts: &VerifyOptions) -> Result<(f64, VerifyMethod, usize)> {
    let support = union_support(&[realized, target]);
    let k = support.len();
    if k <= opts.limits.dense_qubits {
        let u = compose_dense(realized, &support);
        let t = compose_dense(target, &support);
        return Ok((linalg::fidelity(&t, &u), VerifyMethod::Dense, k));
    }
    opts.limits.check_state("state-vector verification", k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut total = C64::new(0.0, 0.0);
    for _ in 0..opts.samples.max(1) {
        let psi = linalg::random_state(&mut rng, 1 << k);
        let mut a = psi.clone();
        apply_all(&mut a, realized, &support);
        let mut b = psi;
        apply_all(&mut b, target, &support);
        total += linalg::inner(&b, &a);
    }
    Ok((total.norm() / opts.samples.max(1) as f64, VerifyMethod::StateVector, k))
}

/// Exact-adiabatic check of a program against its target.
pub fn verify(program: &PathProgram, opts: &VerifyOptions) -> Result<Verification> {
    let realized = program.realized(true)?;
    let (fidelity, method, qubits) = compare(&realized, &program.target_factors(), opts)?;
    log::info!("{}: F = {:.3e} deficit via {:?} on {} qubits", program.name, 1.0 - fidelity, method, qubits);
    Ok(Verification {
        program: program.name.clone(),
        fidelity,
        method,
        qubits,
        segments: program.segments().count(),
    })
}

/// Dense unitary of the program on its support, with or without the
/// recorded phase corrections.
pub fn geometric_part(program: &PathProgram, with_corrections: bool, limits: &Limits) -> Result<LocalUnitary> {
    let realized = program.realized(with_corrections)?;
    let support = union_support(&[&realized]);
    limits.check_dense("geometric part", support.len())?;
    Ok(LocalUnitary {
        matrix: compose_dense(&realized, &support),
        qubits: support,
    })
}

/// Finite-time check: every segment runs for `ratio * T_d / 2` under its
/// own schedule shape and contributes its phase-stripped propagator.
pub fn verify_finite_time(program: &PathProgram, ratio: f64, opts: &VerifyOptions) -> Result<FiniteTimeReport> {
    if !(ratio > 0.0) {
        return Err(Error::InvalidSchedule(format!("ratio must be positive, got {ratio}")));
    }
    let evo = EvolutionOptions {
        max_diabatic: 1.0,
        ..EvolutionOptions::default()
    };
    let parts: Vec<(LocalUnitary, f64)> = program
        .steps
        .par_iter()
        .map(|s| match s {
            ProgramStep::Segment(seg) => {
                let mut seg = seg.clone();
                seg.schedule = seg.schedule.with_duration(ratio * DIABATIC_TIME / 2.0);
                let r = evolve_segment(&seg, &evo)?;
                Ok((r.phase_stripped, r.diabatic_error))
            }
            ProgramStep::Correction(c) => Ok((
                LocalUnitary {
                    qubits: c.qubits.clone(),
                    matrix: c.gate.matrix(),
                },
                0.0,
            )),
        })
        .collect::<Result<_>>()?;
    let max_diabatic = parts.iter().map(|p| p.1).fold(0.0, f64::max);
    let units: Vec<LocalUnitary> = parts.into_iter().map(|p| p.0).collect();
    let (fidelity, _, _) = compare(&units, &program.target_factors(), opts)?;
    Ok(FiniteTimeReport {
        ratio,
        fidelity,
        max_diabatic,
    })
}

fn apply_group_op(op: &GroupOp, state: &[C64], n: usize) -> Vec<C64> {
    match op {
        GroupOp::Pauli(p) => {
            let mut s = state.to_vec();
            p.apply(&mut s);
            s
        }
        GroupOp::Conditional(c) => {
            let mut a = state.to_vec();
            c.if_zero.apply(&mut a);
            let mut b = state.to_vec();
            c.if_one.apply(&mut b);
            let mask = linalg::bit(n, c.control);
            (0..state.len()).map(|i| if i & mask == 0 { a[i] } else { b[i] }).collect()
        }
    }
}

/// Largest deviation of `T G_before T^dagger` from the tracked
/// `G_after`, generator by generator, measured on a random state.
pub fn check_group_consistency(program: &PathProgram, opts: &VerifyOptions) -> Result<f64> {
    let before = &program.group_before;
    let after = &program.group_after;
    if before.elements.len() != after.elements.len() || after.dropped != before.dropped {
        return Err(Error::Unsupported(
            "group consistency needs a Clifford program (generators were dropped)".into(),
        ));
    }
    let n = program.n_qubits;
    opts.limits.check_state("group consistency", n)?;
    let all: Vec<usize> = (0..n).collect();
    let target = program.target_factors();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let psi = linalg::random_state(&mut rng, 1 << n);
    let mut t_psi = psi.clone();
    apply_all(&mut t_psi, &target, &all);
    let worst = before
        .elements
        .par_iter()
        .zip(&after.elements)
        .map(|(b, a)| {
            let lhs = apply_group_op(&a.op, &t_psi, n);
            let mut rhs = apply_group_op(&b.op, &psi, n);
            apply_all(&mut rhs, &target, &all);
            lhs.iter().zip(&rhs).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

fn frames_along(model: &crate::evolution::LocalModel, samples: usize) -> Result<Vec<Vec<CMatrix>>> {
    let sizes: Vec<usize> = model
        .clusters(0.0)?
        .iter()
        .map(|(_, p)| p.trace().re.round() as usize)
        .collect();
    let mut frames = vec![Vec::with_capacity(samples + 1); sizes.len()];
    for k in 0..=samples {
        let (_, vecs) = linalg::eigh(&model.at(k as f64 / samples as f64));
        let mut col = 0;
        for (n, &d) in sizes.iter().enumerate() {
            frames[n].push(vecs.columns(col, d).into_owned());
            col += d;
        }
    }
    Ok(frames)
}

fn segment_cross_check(seg: &crate::evolution::SegmentHamiltonian) -> Result<f64> {
    let model = seg.local_model()?;
    let u = exact_adiabatic_transport(seg)?.matrix;
    let deviation = |samples: usize| -> Result<f64> {
        let mut worst: f64 = 0.0;
        for frames in frames_along(&model, samples)? {
            let first = frames[0].clone();
            let last = frames.last().unwrap().clone();
            let t = holonomy::transport(&EigenFramePath::new(frames, false)?)?;
            worst = worst.max(linalg::max_abs(&(last.adjoint() * &u * &first - t)));
        }
        Ok(worst)
    };
    let mut samples = 256;
    let mut dev = deviation(samples)?;
    while dev > 1e-9 && samples < 1 << 14 {
        samples *= 2;
        dev = deviation(samples)?;
    }
    Ok(dev)
}

/// Largest disagreement, over all segments and eigenspaces, between
/// the projector-product transport and the frame-overlap transport.
pub fn holonomy_cross_check(program: &PathProgram) -> Result<f64> {
    let segs: Vec<_> = program.segments().collect();
    let devs: Vec<f64> = segs.par_iter().map(|s| segment_cross_check(s)).collect::<Result<_>>()?;
    Ok(devs.into_iter().fold(0.0, f64::max))
}
