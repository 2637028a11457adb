//! Single-Pauli fault injection into compiled programs, followed by ideal
//! syndrome projection and minimum-weight recovery.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::gf2::Echelon;
use crate::codes::TrackedGroup;
use crate::error::{Error, Result};
use crate::evolution::{transport_interval, LocalUnitary, TransportOptions};
use crate::linalg::{self, c, CMatrix, Limits, C64};
use crate::pauli::{PauliLetter, PauliOperator};
use crate::programs::{PathProgram, ProgramStep};

/// Injection points within each segment used by default.
pub const DEFAULT_FRACTIONS: [f64; 3] = [0.0, 0.5, 1.0];

/// Sectors lighter than this are ignored.
const SECTOR_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorEvent {
    pub qubit: usize,
    pub pauli: PauliLetter,
    /// Index among the program's segments, corrections not counted.
    pub segment: usize,
    pub fraction: f64,
}

impl ErrorEvent {
    pub fn new(qubit: usize, pauli: PauliLetter, segment: usize, fraction: f64) -> Self {
        ErrorEvent {
            qubit,
            pauli,
            segment,
            fraction,
        }
    }
}

/// Extra manipulation of the pre-recovery state, for immunity checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Perturbation {
    #[default]
    None,
    /// Multiply every syndrome sector by a seeded random phase.
    SyndromePhases(u64),
    /// Apply a seeded random element of the gauge group.
    GaugeElement(u64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FaultOptions {
    /// Allowed logical infidelity after recovery.
    pub tol: f64,
    pub limits: Limits,
    /// Seed of the random initial logical state.
    pub seed: u64,
    pub perturbation: Perturbation,
    pub transport: TransportOptions,
}

impl Default for FaultOptions {
    fn default() -> Self {
        FaultOptions {
            tol: 1e-6,
            limits: Limits::from_env(),
            seed: 11,
            perturbation: Perturbation::None,
            transport: TransportOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaultReport {
    pub events: Vec<ErrorEvent>,
    pub logical_fidelity_after_recovery: f64,
    /// Largest weight, per block, of the correction applied in any
    /// populated syndrome sector.
    pub residual_error_weight_per_block: BTreeMap<usize, usize>,
    /// Corrections applied, one per populated sector.
    pub corrections: Vec<PauliOperator>,
    /// Some populated syndrome had no unambiguous correction.
    pub flagged: bool,
    pub verdict: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub program: String,
    pub events: usize,
    pub worst_fidelity: f64,
    pub failures: Vec<FaultReport>,
    pub reports: Vec<FaultReport>,
}

impl ScanReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
struct Entry {
    correction: PauliOperator,
    ambiguous: bool,
}

/// Syndrome lookup for the Pauli stabilizers of a tracked group.
#[derive(Clone, Debug)]
pub struct Decoder {
    pub stabilizers: Vec<PauliOperator>,
    gauge: Echelon,
    blocks: Vec<usize>,
    table: HashMap<u64, Entry>,
}

fn block_options(qs: &[usize], cap: usize) -> Vec<Vec<(usize, PauliLetter)>> {
    let mut all = vec![Vec::new()];
    let mut frontier: Vec<Vec<(usize, PauliLetter)>> = vec![Vec::new()];
    for _ in 0..cap {
        let mut next = Vec::new();
        for o in &frontier {
            let start = o.last().map_or(0, |&(q, _)| qs.iter().position(|&x| x == q).unwrap() + 1);
            for &q in &qs[start..] {
                for l in PauliLetter::NONTRIVIAL {
                    let mut g = o.clone();
                    g.push((q, l));
                    next.push(g);
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

/// Every Pauli with at most `cap` non-identity factors inside each block,
/// sorted by weight and then lexicographically.
fn candidates(n: usize, blocks: &[usize], cap: usize) -> Vec<PauliOperator> {
    let n_blocks = blocks.iter().copied().max().map_or(0, |b| b + 1);
    let mut out: Vec<Vec<(usize, PauliLetter)>> = vec![Vec::new()];
    for b in 0..n_blocks {
        let qs: Vec<usize> = (0..n).filter(|&q| blocks[q] == b).collect();
        let opts = block_options(&qs, cap);
        out = out
            .into_iter()
            .flat_map(|acc| {
                opts.iter().map(move |o| {
                    let mut a = acc.clone();
                    a.extend(o.iter().copied());
                    a
                })
            })
            .collect();
    }
    let mut ops: Vec<PauliOperator> = out.iter().map(|f| PauliOperator::from_sparse(n, f)).collect();
    ops.sort_by_cached_key(|p| p.canonical_key());
    ops
}

impl Decoder {
    /// Table of minimum-weight corrections with at most one qubit per block.
    pub fn new(group: &TrackedGroup) -> Result<Self> {
        let stabilizers = group.stabilizers();
        if stabilizers.len() > 64 {
            return Err(Error::Unsupported(format!("{} stabilizers in one syndrome", stabilizers.len())));
        }
        let gauge = Echelon::from_rows(&group.gauge_elements().iter().map(|p| p.symplectic()).collect::<Vec<_>>());
        let mut dec = Decoder {
            stabilizers,
            gauge,
            blocks: group.blocks.clone(),
            table: HashMap::new(),
        };
        for e in candidates(group.n_qubits, &group.blocks, 1) {
            let s = dec.syndrome_of(&e);
            match dec.table.get_mut(&s) {
                None => {
                    dec.table.insert(
                        s,
                        Entry {
                            correction: e,
                            ambiguous: false,
                        },
                    );
                }
                Some(entry) => {
                    if entry.correction.weight() == e.weight() && !entry.ambiguous {
                        let prod = entry.correction.mul(&e)?;
                        entry.ambiguous = !dec.gauge.contains(&prod.symplectic());
                    }
                }
            }
        }
        Ok(dec)
    }

    pub fn syndrome_of(&self, error: &PauliOperator) -> u64 {
        self.stabilizers
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.commutes_with(error))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    /// Correction for a syndrome and whether it is ambiguous. `None` when
    /// no error with at most one qubit per block produces the syndrome.
    pub fn lookup(&self, syndrome: u64) -> Option<(&PauliOperator, bool)> {
        self.table.get(&syndrome).map(|e| (&e.correction, e.ambiguous))
    }

    /// Whether two Paulis differ by an element of the gauge group.
    pub fn gauge_equivalent(&self, a: &PauliOperator, b: &PauliOperator) -> Result<bool> {
        Ok(self.gauge.contains(&a.mul(b)?.symplectic()))
    }

    fn block_weights(&self, p: &PauliOperator) -> BTreeMap<usize, usize> {
        let mut w = BTreeMap::new();
        for q in p.support() {
            *w.entry(self.blocks[q]).or_insert(0) += 1;
        }
        w
    }

    /// Per-block weights of a lightest error with this syndrome and at most
    /// two qubits per block; blocks needing more are reported as 3.
    fn wide_weights(&self, syndrome: u64) -> BTreeMap<usize, usize> {
        let n = self.blocks.len();
        candidates(n, &self.blocks, 2)
            .into_iter()
            .find(|e| self.syndrome_of(e) == syndrome)
            .map(|e| self.block_weights(&e))
            .unwrap_or_else(|| self.blocks.iter().map(|&b| (b, 3)).collect())
    }
}

/// One populated syndrome sector of a recovered state.
#[derive(Clone, Debug)]
pub struct Sector {
    pub syndrome: u64,
    pub probability: f64,
    pub correction: Option<PauliOperator>,
    pub ambiguous: bool,
}

#[derive(Clone, Debug)]
pub struct Recovery {
    pub sectors: Vec<Sector>,
    /// Logical density matrix averaged over sectors after correction.
    pub logical: CMatrix,
}

/// Split a state into the joint eigenspaces of commuting stabilizers.
fn split_sectors(state: &[C64], stabilizers: &[PauliOperator]) -> Vec<(u64, Vec<C64>)> {
    let mut parts = vec![(0u64, state.to_vec())];
    for (i, s) in stabilizers.iter().enumerate() {
        let mut next = Vec::with_capacity(parts.len() * 2);
        for (bits, v) in parts {
            let mut sv = v.clone();
            s.apply(&mut sv);
            let plus: Vec<C64> = v.iter().zip(&sv).map(|(a, b)| (a + b) * 0.5).collect();
            let minus: Vec<C64> = v.iter().zip(&sv).map(|(a, b)| (a - b) * 0.5).collect();
            for (flag, part) in [(0, plus), (1u64 << i, minus)] {
                if linalg::norm(&part).powi(2) > SECTOR_FLOOR {
                    next.push((bits | flag, part));
                }
            }
        }
        parts = next;
    }
    parts
}

/// Bare logical Pauli operators `P_1 (x) ... (x) P_K` in the order of
/// `PauliOperator::from_letters` over `K` logical qubits.
fn logical_basis(group: &TrackedGroup) -> Result<Vec<(PauliOperator, CMatrix)>> {
    let k = group.logicals.len();
    let mut xs = Vec::with_capacity(k);
    let mut zs = Vec::with_capacity(k);
    for (i, l) in group.logicals.iter().enumerate() {
        match (&l.x, &l.z) {
            (Some(x), Some(z)) => {
                xs.push(x.clone());
                zs.push(z.clone());
            }
            _ => return Err(Error::Unsupported(format!("logical qubit {i} is no longer tracked as a Pauli"))),
        }
    }
    let letters = PauliLetter::ALL;
    let mut out = Vec::with_capacity(1 << (2 * k));
    for idx in 0..1usize << (2 * k) {
        let word: Vec<PauliLetter> = (0..k).map(|j| letters[(idx >> (2 * (k - 1 - j))) & 3]).collect();
        let mut op = PauliOperator::identity(group.n_qubits);
        for (j, l) in word.iter().enumerate() {
            let f = match l {
                PauliLetter::I => continue,
                PauliLetter::X => xs[j].clone(),
                PauliLetter::Z => zs[j].clone(),
                PauliLetter::Y => xs[j].mul(&zs[j])?.times_i_pow(1),
            };
            op = op.mul(&f)?;
        }
        out.push((op, PauliOperator::from_letters(&word).dense()));
    }
    Ok(out)
}

/// `rho = 2^-K sum_P <P_bar> P` of a normalized code state.
fn logical_density(state: &[C64], basis: &[(PauliOperator, CMatrix)]) -> CMatrix {
    let d = basis[0].1.nrows();
    let mut rho = CMatrix::zeros(d, d);
    for (op, m) in basis {
        rho += m * c(op.expectation(state).re, 0.0);
    }
    rho / c(d as f64, 0.0)
}

fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let (vals, vecs) = linalg::eigh(m);
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| c(v.max(0.0).sqrt(), 0.0)),
    ));
    &vecs * d * vecs.adjoint()
}

/// Uhlmann fidelity `(tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`.
pub fn state_fidelity(rho: &CMatrix, sigma: &CMatrix) -> f64 {
    // For a pure `rho` this is `tr(rho sigma)`, without the square roots of
    // vanishing eigenvalues.
    if (rho * rho).trace().re > 1.0 - 1e-12 {
        return (rho * sigma).trace().re;
    }
    let s = psd_sqrt(rho);
    let m = &s * sigma * &s;
    let m = (&m + m.adjoint()) * c(0.5, 0.0);
    let (vals, _) = linalg::eigh(&m);
    vals.iter().map(|v| v.max(0.0).sqrt()).sum::<f64>().powi(2)
}

/// Project onto syndrome sectors, correct each one and average the
/// resulting logical states. Sector phases and the gauge state drop out.
pub fn recover(state: &[C64], group: &TrackedGroup, decoder: &Decoder) -> Result<Recovery> {
    let basis = logical_basis(group)?;
    let d = basis[0].1.nrows();
    let mut logical = CMatrix::zeros(d, d);
    let mut sectors = Vec::new();
    let mut total = 0.0;
    for (syndrome, mut v) in split_sectors(state, &decoder.stabilizers) {
        let p = linalg::normalize(&mut v).powi(2);
        let (correction, ambiguous) = match decoder.lookup(syndrome) {
            Some((c, amb)) => (Some(c.clone()), amb),
            None => (None, false),
        };
        if let Some(c) = &correction {
            c.apply(&mut v);
        }
        logical += logical_density(&v, &basis) * c(p, 0.0);
        total += p;
        sectors.push(Sector {
            syndrome,
            probability: p,
            correction,
            ambiguous,
        });
    }
    Ok(Recovery {
        sectors,
        logical: logical / c(total, 0.0),
    })
}

/// Seeded random logical amplitudes for `k` encoded qubits.
pub fn random_logical(k: usize, seed: u64) -> Vec<C64> {
    linalg::random_state(&mut ChaCha8Rng::seed_from_u64(seed), 1 << k)
}

fn project_plus(state: &mut Vec<C64>, p: &PauliOperator) {
    let mut pv = state.clone();
    p.apply(&mut pv);
    for (a, b) in state.iter_mut().zip(&pv) {
        *a = (*a + b) * 0.5;
    }
}

/// Code state `sum_x a_x X_bar^x |0_bar>` where `|0_bar>` is `|0...0>`
/// projected onto the code space and the `Z_bar = +1` eigenspace.
pub fn encode(group: &TrackedGroup, amplitudes: &[C64], seed: u64) -> Result<Vec<C64>> {
    let n = group.n_qubits;
    let k = group.logicals.len();
    if amplitudes.len() != 1 << k {
        return Err(Error::LengthMismatch {
            left: 1 << k,
            right: amplitudes.len(),
        });
    }
    let xs: Vec<PauliOperator> = group.logical_x().into_iter().collect::<Option<_>>().ok_or_else(untracked)?;
    let zs: Vec<PauliOperator> = group.logical_z().into_iter().collect::<Option<_>>().ok_or_else(untracked)?;
    let project = |mut v: Vec<C64>| {
        for p in group.stabilizers().iter().chain(&zs) {
            project_plus(&mut v, p);
        }
        let nrm = linalg::normalize(&mut v);
        (v, nrm)
    };
    let mut zero = vec![C64::new(0.0, 0.0); 1 << n];
    zero[0] = c(1.0, 0.0);
    let (mut base, nrm) = project(zero);
    if nrm < 1e-6 {
        base = project(linalg::random_state(&mut ChaCha8Rng::seed_from_u64(seed), 1 << n)).0;
    }
    let mut out = vec![C64::new(0.0, 0.0); 1 << n];
    for (x, a) in amplitudes.iter().enumerate() {
        let mut v = base.clone();
        for (j, xl) in xs.iter().enumerate() {
            if (x >> (k - 1 - j)) & 1 == 1 {
                xl.apply(&mut v);
            }
        }
        for (o, b) in out.iter_mut().zip(&v) {
            *o += a * b;
        }
    }
    linalg::normalize(&mut out);
    Ok(out)
}

fn untracked() -> Error {
    Error::Unsupported("logical operators are no longer Pauli".into())
}

/// A program prepared for repeated fault runs: per-step unitaries, the
/// fault-free state before every step, the decoder and the ideal logical
/// state.
pub struct FaultRunner<'a> {
    program: &'a PathProgram,
    opts: FaultOptions,
    steps: Vec<LocalUnitary>,
    /// Step index of each segment.
    segment_steps: Vec<usize>,
    before: Vec<Vec<C64>>,
    decoder: Decoder,
    ideal: CMatrix,
}

impl<'a> FaultRunner<'a> {
    pub fn new(program: &'a PathProgram, opts: &FaultOptions) -> Result<Self> {
        let n = program.n_qubits;
        opts.limits.check_state("fault injection", n)?;
        let amps = random_logical(program.group_before.logicals.len(), opts.seed);
        let initial = encode(&program.group_before, &amps, opts.seed)?;
        let steps = program.realized(true)?;
        let segment_steps: Vec<usize> = program
            .steps
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, ProgramStep::Segment(_)))
            .map(|(i, _)| i)
            .collect();
        let mut before = Vec::with_capacity(steps.len() + 1);
        let mut v = initial.clone();
        for u in &steps {
            before.push(v.clone());
            u.apply(&mut v, n);
        }
        before.push(v);

        let mut ideal_state = initial;
        for t in program.target_factors() {
            t.apply(&mut ideal_state, n);
        }
        let decoder = Decoder::new(&program.group_after)?;
        let ideal = logical_density(&ideal_state, &logical_basis(&program.group_after)?);
        Ok(FaultRunner {
            program,
            opts: *opts,
            steps,
            segment_steps,
            before,
            decoder,
            ideal,
        })
    }

    pub fn decoder(&self) -> &Decoder {
        &self.decoder
    }

    pub fn n_segments(&self) -> usize {
        self.segment_steps.len()
    }

    /// State at the end of the program with the given faults.
    pub fn faulty_state(&self, events: &[ErrorEvent]) -> Result<Vec<C64>> {
        let n = self.program.n_qubits;
        for e in events {
            if e.qubit >= n || e.segment >= self.n_segments() || !(0.0..=1.0).contains(&e.fraction) {
                return Err(Error::InvalidProgram(format!("fault event {e:?} outside the program")));
            }
        }
        let Some(first) = events.iter().map(|e| self.segment_steps[e.segment]).min() else {
            return Ok(self.before.last().unwrap().clone());
        };
        let mut v = self.before[first].clone();
        for (i, step) in self.program.steps.iter().enumerate().skip(first) {
            let ProgramStep::Segment(seg) = step else {
                self.steps[i].apply(&mut v, n);
                continue;
            };
            let k = self.segment_steps.iter().position(|&s| s == i).unwrap();
            let mut here: Vec<&ErrorEvent> = events.iter().filter(|e| e.segment == k).collect();
            if here.is_empty() {
                self.steps[i].apply(&mut v, n);
                continue;
            }
            here.sort_by(|a, b| a.fraction.total_cmp(&b.fraction));
            let mut at = 0.0;
            for e in here {
                if e.fraction > at {
                    transport_interval(seg, at, e.fraction, &self.opts.transport)?.unitary.apply(&mut v, n);
                    at = e.fraction;
                }
                PauliOperator::single(n, e.qubit, e.pauli).apply(&mut v);
            }
            if at < 1.0 {
                transport_interval(seg, at, 1.0, &self.opts.transport)?.unitary.apply(&mut v, n);
            }
        }
        Ok(v)
    }

    fn perturb(&self, v: &mut Vec<C64>) -> Result<()> {
        match self.opts.perturbation {
            Perturbation::None => {}
            Perturbation::SyndromePhases(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut out = vec![C64::new(0.0, 0.0); v.len()];
                for (_, part) in split_sectors(v, &self.decoder.stabilizers) {
                    let ph = C64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU);
                    for (o, a) in out.iter_mut().zip(&part) {
                        *o += a * ph;
                    }
                }
                *v = out;
            }
            Perturbation::GaugeElement(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut g = PauliOperator::identity(self.program.n_qubits);
                for p in self.program.group_after.gauge_elements() {
                    if rng.random::<bool>() {
                        g = g.mul(&p)?;
                    }
                }
                g.apply(v);
            }
        }
        Ok(())
    }

    pub fn run(&self, events: &[ErrorEvent]) -> Result<FaultReport> {
        let mut v = self.faulty_state(events)?;
        self.perturb(&mut v)?;
        let rec = recover(&v, &self.program.group_after, &self.decoder)?;
        let fidelity = state_fidelity(&self.ideal, &rec.logical);
        let mut weights: BTreeMap<usize, usize> = (0..self.program.group_after.n_blocks()).map(|b| (b, 0)).collect();
        let mut flagged = false;
        let mut corrections = Vec::new();
        for s in rec.sectors.iter().filter(|s| s.probability > SECTOR_FLOOR.sqrt()) {
            let w = match &s.correction {
                Some(c) => {
                    corrections.push(c.clone());
                    self.decoder.block_weights(c)
                }
                None => self.decoder.wide_weights(s.syndrome),
            };
            flagged |= s.ambiguous || s.correction.is_none();
            for (b, x) in w {
                let e = weights.entry(b).or_insert(0);
                *e = (*e).max(x);
            }
        }
        let verdict = !flagged && weights.values().all(|&w| w <= 1) && fidelity > 1.0 - self.opts.tol;
        Ok(FaultReport {
            events: events.to_vec(),
            logical_fidelity_after_recovery: fidelity,
            residual_error_weight_per_block: weights,
            corrections,
            flagged,
            verdict,
        })
    }
}

pub fn run_with_fault(program: &PathProgram, event: &ErrorEvent, opts: &FaultOptions) -> Result<FaultReport> {
    FaultRunner::new(program, opts)?.run(std::slice::from_ref(event))
}

/// Every `qubit x pauli x segment x fraction` single fault, in parallel.
pub fn fault_scan(
    program: &PathProgram,
    qubits: &[usize],
    paulis: &[PauliLetter],
    fractions: &[f64],
    opts: &FaultOptions,
) -> Result<ScanReport> {
    let runner = FaultRunner::new(program, opts)?;
    let mut events = Vec::new();
    for &q in qubits {
        for &p in paulis {
            for s in 0..runner.n_segments() {
                for &f in fractions {
                    events.push(ErrorEvent::new(q, p, s, f));
                }
            }
        }
    }
    let reports: Vec<FaultReport> = events.par_iter().map(|e| runner.run(std::slice::from_ref(e))).collect::<Result<_>>()?;
    let worst_fidelity = reports.iter().map(|r| r.logical_fidelity_after_recovery).fold(1.0, f64::min);
    log::info!("{}: {} fault events, worst fidelity {:.3e} deficit", program.name, reports.len(), 1.0 - worst_fidelity);
    Ok(ScanReport {
        program: program.name.clone(),
        events: reports.len(),
        worst_fidelity,
        failures: reports.iter().filter(|r| !r.verdict).cloned().collect(),
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{build_bacon_shor, TrackedGroup};

    fn bs() -> TrackedGroup {
        TrackedGroup::from_code(&build_bacon_shor(3))
    }

    #[test]
    fn candidates_respect_the_per_block_cap() {
        let c = candidates(4, &[0, 0, 1, 1], 1);
        assert_eq!(c.len(), 7 * 7);
        assert!(c[0].is_identity_up_to_phase());
        assert_eq!(c[1].weight(), 1);
        assert_eq!(candidates(3, &[0, 0, 0], 2).len(), 1 + 9 + 27);
    }

    #[test]
    fn single_errors_on_bacon_shor_decode_unambiguously() {
        let g = bs();
        let dec = Decoder::new(&g).unwrap();
        for q in 0..9 {
            for l in PauliLetter::NONTRIVIAL {
                let e = PauliOperator::single(9, q, l);
                let (c, amb) = dec.lookup(dec.syndrome_of(&e)).unwrap();
                assert!(!amb);
                assert!(dec.gauge_equivalent(c, &e).unwrap(), "{e} -> {c}");
            }
        }
    }

    #[test]
    fn clean_state_has_trivial_syndrome() {
        let g = bs();
        let psi = encode(&g, &random_logical(1, 3), 3).unwrap();
        let dec = Decoder::new(&g).unwrap();
        let rec = recover(&psi, &g, &dec).unwrap();
        assert_eq!(rec.sectors.len(), 1);
        assert_eq!(rec.sectors[0].syndrome, 0);
        assert!(rec.sectors[0].correction.as_ref().unwrap().is_identity_up_to_phase());
        let pure = logical_density(&psi, &logical_basis(&g).unwrap());
        assert!((state_fidelity(&pure, &rec.logical) - 1.0).abs() < 1e-12);
        assert!((pure.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn encoded_logical_amplitudes_are_read_back() {
        let g = bs();
        let amps = [c(0.6, 0.0), c(0.0, 0.8)];
        let psi = encode(&g, &amps, 1).unwrap();
        let rho = logical_density(&psi, &logical_basis(&g).unwrap());
        let want = CMatrix::from_fn(2, 2, |i, j| amps[i] * amps[j].conj());
        assert!(linalg::max_abs(&(rho - want)) < 1e-12);
    }

    #[test]
    fn uhlmann_fidelity_of_orthogonal_and_mixed_states() {
        let zero = linalg::basis_projector(0);
        let one = linalg::basis_projector(1);
        assert!(state_fidelity(&zero, &one).abs() < 1e-12);
        let mixed = linalg::eye(2) * c(0.5, 0.0);
        assert!((state_fidelity(&zero, &mixed) - 0.5).abs() < 1e-12);
    }
}
