//! Compilation of gates into segment sequences on a tracked group.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::catalog::{self, Axis, PZ, PX, PY, MZ};
use super::{segment_weight, PathProgram, PhaseCorrection, ProgramStep, TargetFactor};
use crate::codes::{find_element, find_starting_element, TrackedGroup};
use crate::error::{Error, Result};
use crate::evolution::{Branch, SegmentForm, SegmentHamiltonian};
use crate::gates::Gate;
use crate::linalg::{self, c, CMatrix};
use crate::pauli::{PauliLetter, PauliOperator, PauliSum};
use crate::schedules::Schedule;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompileOptions {
    pub schedule: Schedule,
    /// Reject any segment whose Hamiltonian has a term above this weight.
    pub weight_budget: Option<usize>,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            schedule: Schedule::linear(1.0),
            weight_budget: None,
        }
    }
}

/// How a C-NOT is driven: from a `Z_t G~` element, from an `X_t G~`
/// element, or backwards from a `Z_c Z_t G~` element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CnotForm {
    Forward,
    XForm,
    Backward,
}

pub const ALL_CNOT_FORMS: [CnotForm; 3] = [CnotForm::Forward, CnotForm::XForm, CnotForm::Backward];

/// Gates understood by [`compile`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateSpec {
    /// Single-qubit gate; targets `[q]`.
    Single(Gate),
    /// Targets `[control, target]`, cheapest available form.
    Cnot,
    /// C-NOT forced into one form.
    CnotWith(CnotForm),
    /// Gates applied to the target conditioned on a cat-state control;
    /// targets `[control, target]`.
    Cond(Vec<Gate>),
    /// Cat state on the listed fresh qubits.
    CatPrep,
    /// Parity of two cat qubits onto a fresh ancilla; targets `[a, b, ancilla]`.
    CatParity,
    /// Single-qubit gate through the identity-start construction;
    /// targets `[target, anchor]`.
    ViaIdentity(Gate),
    /// C-NOT between matching qubits of blocks 0 and 1.
    TransversalCnot,
    /// Toffoli on a cat qubit and one qubit of each of two code blocks;
    /// targets `[cat, a, b]`.
    ToffoliOnCat,
}

impl fmt::Display for GateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |gs: &[Gate]| gs.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(",");
        match self {
            GateSpec::Single(g) => write!(f, "{g}"),
            GateSpec::Cnot => write!(f, "cnot"),
            GateSpec::CnotWith(CnotForm::Forward) => write!(f, "cnot-forward"),
            GateSpec::CnotWith(CnotForm::XForm) => write!(f, "cnot-x"),
            GateSpec::CnotWith(CnotForm::Backward) => write!(f, "cnot-backward"),
            GateSpec::Cond(gs) => write!(f, "cond:{}", list(gs)),
            GateSpec::CatPrep => write!(f, "cat-prep"),
            GateSpec::CatParity => write!(f, "cat-parity"),
            GateSpec::ViaIdentity(g) => write!(f, "via-identity:{g}"),
            GateSpec::TransversalCnot => write!(f, "transversal-cnot"),
            GateSpec::ToffoliOnCat => write!(f, "toffoli-on-cat"),
        }
    }
}

impl FromStr for GateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let gates = |list: &str| -> Result<Vec<Gate>> { list.split(',').map(|g| g.trim().parse()).collect() };
        if let Some(rest) = s.strip_prefix("cond:") {
            return Ok(GateSpec::Cond(gates(rest)?));
        }
        if let Some(rest) = s.strip_prefix("via-identity:") {
            return Ok(GateSpec::ViaIdentity(rest.parse()?));
        }
        Ok(match s.as_str() {
            "cnot" | "cx" => GateSpec::Cnot,
            "cnot-forward" => GateSpec::CnotWith(CnotForm::Forward),
            "cnot-x" | "cnot-xform" => GateSpec::CnotWith(CnotForm::XForm),
            "cnot-backward" => GateSpec::CnotWith(CnotForm::Backward),
            "cat-prep" => GateSpec::CatPrep,
            "cat-parity" => GateSpec::CatParity,
            "transversal-cnot" => GateSpec::TransversalCnot,
            "toffoli-on-cat" => GateSpec::ToffoliOnCat,
            other => {
                let g: Gate = other.parse()?;
                if g.arity() != 1 {
                    return Err(Error::Unsupported(format!("gate {other} needs a dedicated program")));
                }
                GateSpec::Single(g)
            }
        })
    }
}

/// Compile `spec` against `context`.
pub fn compile(spec: &GateSpec, context: &TrackedGroup, targets: &[usize], opts: &CompileOptions) -> Result<PathProgram> {
    let bad_targets = |need: &str| Error::InvalidTarget {
        gate: format!("{spec} (expects {need})"),
        target: targets.to_vec(),
        n_qubits: context.n_qubits,
    };
    let mut b = ProgramBuilder::new(&spec.to_string(), context, opts);
    match (spec, targets) {
        (GateSpec::Single(g), [q]) => b.single_qubit(*q, *g)?,
        (GateSpec::Cnot, [ctl, t]) => {
            b.cnot(*ctl, *t, &ALL_CNOT_FORMS)?;
        }
        (GateSpec::CnotWith(form), [ctl, t]) => {
            b.cnot(*ctl, *t, &[*form])?;
        }
        (GateSpec::Cond(gs), [ctl, t]) => b.conditional(*ctl, *t, gs)?,
        (GateSpec::CatPrep, qs) if !qs.is_empty() => b.cat_prep(qs)?,
        (GateSpec::CatParity, [x, y, a]) => b.cat_parity(&[*x, *y], *a)?,
        (GateSpec::ViaIdentity(g), [t, anchor]) => b.single_qubit_via_identity(*t, *g, *anchor)?,
        (GateSpec::TransversalCnot, _) => b.transversal_cnot(0, 1)?,
        (GateSpec::ToffoliOnCat, [x, y, z]) => super::toffoli::toffoli_word(&mut b, [*x, *y, *z])?,
        (GateSpec::Single(_), _) => return Err(bad_targets("[qubit]")),
        (GateSpec::ToffoliOnCat, _) => return Err(bad_targets("[cat, a, b]")),
        (GateSpec::CatParity, _) => return Err(bad_targets("[a, b, ancilla]")),
        (GateSpec::CatPrep, _) => return Err(bad_targets("a qubit list")),
        _ => return Err(bad_targets("[control, target]")),
    }
    Ok(b.finish())
}

fn sum(p: &PauliOperator) -> PauliSum {
    PauliSum::from_pauli(p).expect("Hermitian Pauli")
}

fn bloch(axis: Axis, q: usize, tail: &PauliOperator) -> PauliSum {
    PauliSum::bloch(axis, q, tail).expect("tail acts trivially on the qubit")
}

/// Diagonal correction `diag(1, e^{i angle})`, named when it is a Clifford.
fn phase_gate(angle: f64) -> Option<Gate> {
    let q = angle / std::f64::consts::FRAC_PI_2;
    if (q - q.round()).abs() < 1e-12 {
        match (q.round() as i64).rem_euclid(4) {
            0 => None,
            1 => Some(Gate::S),
            2 => Some(Gate::Z),
            _ => Some(Gate::Sdg),
        }
    } else {
        Some(Gate::Phase(angle))
    }
}

/// Incremental compiler. Each method appends segments, records the
/// intended unitary and updates the tracked group.
pub struct ProgramBuilder {
    name: String,
    before: TrackedGroup,
    group: TrackedGroup,
    steps: Vec<ProgramStep>,
    target: Vec<TargetFactor>,
    opts: CompileOptions,
    counter: usize,
}

impl ProgramBuilder {
    pub fn new(name: &str, group: &TrackedGroup, opts: &CompileOptions) -> Self {
        ProgramBuilder {
            name: name.to_string(),
            before: group.clone(),
            group: group.clone(),
            steps: Vec::new(),
            target: Vec::new(),
            opts: opts.clone(),
            counter: 0,
        }
    }

    pub fn group(&self) -> &TrackedGroup {
        &self.group
    }

    pub fn finish(self) -> PathProgram {
        PathProgram {
            name: self.name,
            n_qubits: self.before.n_qubits,
            steps: self.steps,
            target: self.target,
            group_before: self.before,
            group_after: self.group,
        }
    }

    fn n(&self) -> usize {
        self.group.n_qubits
    }

    fn check_qubits(&self, what: &str, qs: &[usize]) -> Result<()> {
        let mut sorted = qs.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if qs.iter().any(|&q| q >= self.n()) || sorted.len() != qs.len() {
            return Err(Error::InvalidTarget {
                gate: what.to_string(),
                target: qs.to_vec(),
                n_qubits: self.n(),
            });
        }
        Ok(())
    }

    fn label(&mut self, what: &str) -> String {
        self.counter += 1;
        format!("{}:{}", self.counter, what)
    }

    fn push_segment(&mut self, seg: SegmentHamiltonian) -> Result<()> {
        seg.validate()?;
        if let Some(budget) = self.opts.weight_budget {
            let w = segment_weight(&seg);
            if w > budget {
                return Err(Error::WeightBudget {
                    label: seg.label.clone(),
                    weight: w,
                    budget,
                });
            }
        }
        self.steps.push(ProgramStep::Segment(seg));
        Ok(())
    }

    fn push_correction(&mut self, gate: Gate, qubits: &[usize]) {
        self.steps.push(ProgramStep::Correction(PhaseCorrection {
            gate,
            qubits: qubits.to_vec(),
        }));
    }

    fn push_target(&mut self, matrix: CMatrix, qubits: &[usize]) {
        self.target.push(TargetFactor {
            qubits: qubits.to_vec(),
            matrix,
        });
    }

    /// Single-branch legs along `axes` on qubit `q`, tensored with `tail`.
    fn push_axis_path(&mut self, q: usize, tail: &PauliOperator, axes: &[Axis], what: &str) -> Result<()> {
        for w in axes.windows(2) {
            let label = self.label(what);
            let seg = SegmentHamiltonian::single(&label, &[q], bloch(w[0], q, tail), bloch(w[1], q, tail), &self.opts.schedule)
                .with_theta(catalog::leg_theta(w[0], w[1]));
            self.push_segment(seg)?;
        }
        Ok(())
    }

    /// Cheapest element of the form `sigma_q (x) G~` with `G~` trivial on
    /// `trivial_on`; ties prefer Z, then X, then Y.
    fn starting_element(&self, q: usize, trivial_on: &[usize]) -> Result<(PauliOperator, PauliLetter)> {
        let mut best: Option<(PauliOperator, PauliLetter)> = None;
        let mut last_err = None;
        for l in [PauliLetter::Z, PauliLetter::X, PauliLetter::Y] {
            match find_starting_element(&self.group, q, l, trivial_on) {
                Ok(p) => {
                    if best.as_ref().is_none_or(|(b, _)| p.weight() < b.weight()) {
                        best = Some((p, l));
                    }
                }
                Err(e) => last_err = Some(e),
            }
        }
        if let Some(b) = best {
            return Ok(b);
        }
        let encoded = self.group.gauge_elements().iter().any(|p| p.letter(q) != PauliLetter::I);
        if encoded {
            return Err(last_err.expect("at least one search failed"));
        }
        // An unencoded qubit: drive it with its bare Z.
        log::debug!("qubit {q} is not acted on by the group; using Z_{q} as the starting element");
        Ok((PauliOperator::single(self.n(), q, PauliLetter::Z), PauliLetter::Z))
    }

    /// Apply `u` on `q` along a path starting at `axis`, tensored with `tail`.
    fn drive_single(&mut self, q: usize, u: &CMatrix, catalog_gate: Option<Gate>, axis: Axis, tail: &PauliOperator, what: &str) -> Result<()> {
        let frame = catalog::frame_for(axis);
        let axes = catalog::path_in_frame(u, &frame, catalog_gate);
        self.push_axis_path(q, tail, &axes, what)
    }

    pub fn single_qubit(&mut self, q: usize, gate: Gate) -> Result<()> {
        self.check_qubits(&gate.name(), &[q])?;
        if gate.arity() != 1 {
            return Err(Error::Unsupported(format!("{} is not a single-qubit gate", gate.name())));
        }
        let (elem, letter) = self.starting_element(q, &[])?;
        let tail = elem.without(q);
        let what = gate.name();
        self.drive_single(q, &gate.matrix(), Some(gate), letter.axis(), &tail, &what)?;
        self.push_target(gate.matrix(), &[q]);
        self.group.track_gate(gate, &[q])
    }

    /// Single-qubit gate on `target` through the identity-start route: an
    /// element `P` acting on `anchor` but not on `target` is rotated into
    /// `Z_target Q` (`Q` = `P` with its anchor factor swapped for an
    /// anticommuting one), the gate is applied against `Q`, and the first
    /// leg is undone from the rotated axis.
    pub fn single_qubit_via_identity(&mut self, target: usize, gate: Gate, anchor: usize) -> Result<()> {
        self.check_qubits(&gate.name(), &[target, anchor])?;
        let mut best: Option<PauliOperator> = None;
        for l in [PauliLetter::X, PauliLetter::Z, PauliLetter::Y] {
            if let Ok(p) = find_element(&self.group, &[(anchor, l), (target, PauliLetter::I)]) {
                if best.as_ref().is_none_or(|b| p.weight() < b.weight()) {
                    best = Some(p);
                }
            }
        }
        let p = best.ok_or(Error::NoStartingElement {
            qubit: anchor,
            desired: 'X',
        })?;
        let mut q_op = p.clone();
        q_op.set_letter(
            anchor,
            match p.letter(anchor) {
                PauliLetter::X => PauliLetter::Z,
                _ => PauliLetter::X,
            },
        );
        let zq = bloch(PZ, target, &q_op);
        let what = format!("{}-via-identity", gate.name());
        let label = self.label(&what);
        self.push_segment(SegmentHamiltonian::single(&label, &[target], sum(&p), zq, &self.opts.schedule))?;
        self.drive_single(target, &gate.matrix(), Some(gate), PZ, &q_op, &what)?;
        let m = catalog::rotate_axis(&gate.matrix(), PZ);
        let label = self.label(&what);
        self.push_segment(SegmentHamiltonian::single(&label, &[target], bloch(m, target, &q_op), sum(&p), &self.opts.schedule))?;
        self.push_target(gate.matrix(), &[target]);
        self.group.track_gate(gate, &[target])
    }

    /// Cheapest element for each allowed C-NOT form, by audited weight.
    fn cnot_element(&self, ctl: usize, t: usize, forms: &[CnotForm]) -> Result<(CnotForm, PauliOperator)> {
        let mut best: Option<(usize, CnotForm, PauliOperator)> = None;
        for &form in forms {
            let found = match form {
                CnotForm::Forward => find_starting_element(&self.group, t, PauliLetter::Z, &[ctl]),
                CnotForm::XForm => find_starting_element(&self.group, t, PauliLetter::X, &[ctl]),
                CnotForm::Backward => find_element(&self.group, &[(t, PauliLetter::Z), (ctl, PauliLetter::Z)]),
            };
            if let Ok(e) = found {
                let w = match form {
                    CnotForm::Backward => e.weight(),
                    _ => e.weight() + 1,
                };
                if best.as_ref().is_none_or(|(bw, _, _)| w < *bw) {
                    best = Some((w, form, e));
                }
            }
        }
        if let Some((_, form, e)) = best {
            return Ok((form, e));
        }
        let unencoded = self.group.gauge_elements().iter().all(|p| p.letter(t) == PauliLetter::I);
        if unencoded && forms.contains(&CnotForm::Forward) {
            log::debug!("C-NOT target {t} is not acted on by the group; using Z_{t}");
            return Ok((CnotForm::Forward, PauliOperator::single(self.n(), t, PauliLetter::Z)));
        }
        Err(Error::NoStartingElement {
            qubit: t,
            desired: if forms == [CnotForm::XForm] { 'X' } else { 'Z' },
        })
    }

    /// C-NOT from `ctl` to `t` using the cheapest allowed form.
    pub fn cnot(&mut self, ctl: usize, t: usize, forms: &[CnotForm]) -> Result<CnotForm> {
        self.check_qubits("cnot", &[ctl, t])?;
        let (form, elem) = self.cnot_element(ctl, t, forms)?;
        self.cnot_from(ctl, t, form, &elem)?;
        Ok(form)
    }

    /// C-NOT driven from a given element, which must have the form's
    /// letters on control and target.
    pub fn cnot_from(&mut self, ctl: usize, t: usize, form: CnotForm, elem: &PauliOperator) -> Result<()> {
        let schedule = self.opts.schedule.clone();
        let branch = |a: PauliSum, b: PauliSum| Branch {
            start: a,
            end: b,
            normalize: false,
        };
        match form {
            CnotForm::Forward | CnotForm::Backward => {
                let tail = elem.without(t).without(ctl);
                let label = self.label("cnot");
                let single = SegmentHamiltonian::single(&label, &[t], bloch(PZ, t, &tail), bloch(PY, t, &tail), &schedule)
                    .with_theta(Some(std::f64::consts::FRAC_PI_2));
                let label = self.label("cnot");
                let controlled = SegmentHamiltonian::branched(
                    &label,
                    SegmentForm::Controlled,
                    &[t],
                    &[ctl],
                    vec![
                        branch(bloch(PY, t, &tail), bloch(PZ, t, &tail)),
                        branch(bloch(PY, t, &tail), bloch(MZ, t, &tail)),
                    ],
                    &schedule,
                );
                if form == CnotForm::Forward {
                    self.push_correction(Gate::Sdg, &[ctl]);
                    self.push_segment(single)?;
                    self.push_segment(controlled)?;
                } else {
                    self.push_segment(controlled.reversed())?;
                    self.push_segment(single.reversed())?;
                    self.push_correction(Gate::S, &[ctl]);
                }
            }
            CnotForm::XForm => {
                let tail = elem.without(t);
                self.push_correction(Gate::Sdg, &[ctl]);
                self.push_axis_path(t, &tail, &[PX, PZ, [-1.0, 0.0, 0.0]], "cnot")?;
                let mx = [-1.0, 0.0, 0.0];
                for (b0, b1) in [((mx, PZ), (mx, PY)), ((PZ, PX), (PY, PX))] {
                    let label = self.label("cnot");
                    let seg = SegmentHamiltonian::branched(
                        &label,
                        SegmentForm::Controlled,
                        &[t],
                        &[ctl],
                        vec![
                            branch(bloch(b0.0, t, &tail), bloch(b0.1, t, &tail)),
                            branch(bloch(b1.0, t, &tail), bloch(b1.1, t, &tail)),
                        ],
                        &schedule,
                    );
                    self.push_segment(seg)?;
                }
            }
        }
        self.push_target(Gate::Cnot.matrix(), &[ctl, t]);
        self.group.track_gate(Gate::Cnot, &[ctl, t])
    }

    /// Apply `gates` (single-qubit Cliffords, in order) to `t` conditioned on
    /// the cat qubit `ctl`. Branch 0 holds the starting element fixed; branch
    /// 1 follows the unconditional paths. Both are normalized to unit
    /// spectrum. The residual phase of branch 1 is removed by a diagonal
    /// gate on the control.
    pub fn conditional(&mut self, ctl: usize, t: usize, gates: &[Gate]) -> Result<()> {
        self.check_qubits("cond", &[ctl, t])?;
        let mut cliffords = Vec::new();
        for g in gates {
            match g.clifford() {
                Some(cl) if g.arity() == 1 => cliffords.push(cl),
                _ => return Err(Error::Unsupported(format!("conditional {} (single-qubit Cliffords only)", g.name()))),
            }
        }
        let (elem, letter) = self.starting_element(t, &[ctl])?;
        let tail = elem.without(t);
        let start = letter.axis();
        let mut frame = catalog::frame_for(start);
        let mut realized = linalg::eye(2);
        let mut product = linalg::eye(2);
        for g in gates {
            let axes = catalog::path_in_frame(&g.matrix(), &frame, Some(*g));
            realized = catalog::path_unitary(&axes) * realized;
            product = g.matrix() * &product;
            frame = g.matrix() * frame;
            let what = format!("cond-{}", g.name());
            for w in axes.windows(2) {
                let label = self.label(&what);
                let fixed = bloch(start, t, &tail);
                let seg = SegmentHamiltonian::branched(
                    &label,
                    SegmentForm::ConditionalGroup,
                    &[t],
                    &[ctl],
                    vec![
                        Branch {
                            start: fixed.clone(),
                            end: fixed,
                            normalize: true,
                        },
                        Branch {
                            start: bloch(w[0], t, &tail),
                            end: bloch(w[1], t, &tail),
                            normalize: true,
                        },
                    ],
                    &self.opts.schedule,
                );
                self.push_segment(seg)?;
            }
        }
        // realized = e^{i phi} product
        let phi = linalg::relative_phase(&product, &realized);
        if let Some(g) = phase_gate(-phi) {
            self.push_correction(g, &[ctl]);
        }
        let mut controlled = linalg::eye(4);
        controlled.view_mut((2, 2), (2, 2)).copy_from(&product);
        self.push_target(controlled, &[ctl, t]);
        for cl in cliffords {
            self.group.track_conditional(ctl, cl, &[t])?;
        }
        Ok(())
    }

    /// Cat state `(|0..0> + |1..1>)/sqrt2` on fresh qubits: each qubit is
    /// turned from `Z` to `X`, then `X_j -> +-Z_j` conditioned on the first.
    pub fn cat_prep(&mut self, qubits: &[usize]) -> Result<()> {
        self.check_qubits("cat-prep", qubits)?;
        let n = self.n();
        let first = qubits[0];
        let schedule = self.opts.schedule.clone();
        for &q in qubits {
            let z = PauliOperator::single(n, q, PauliLetter::Z);
            let x = PauliOperator::single(n, q, PauliLetter::X);
            let label = self.label("cat-plus");
            self.push_segment(SegmentHamiltonian::single(&label, &[q], sum(&z), sum(&x), &schedule).with_theta(Some(0.0)))?;
            self.quarter_turn(&z, &x)?;
        }
        let id = PauliOperator::identity(n);
        for &q in &qubits[1..] {
            let label = self.label("cat-link");
            let seg = SegmentHamiltonian::branched(
                &label,
                SegmentForm::Controlled,
                &[q],
                &[first],
                vec![
                    Branch {
                        start: bloch(PX, q, &id),
                        end: bloch(PZ, q, &id),
                        normalize: false,
                    },
                    Branch {
                        start: bloch(PX, q, &id),
                        end: bloch(MZ, q, &id),
                        normalize: false,
                    },
                ],
                &schedule,
            );
            self.push_segment(seg)?;
            let x = PauliOperator::single(n, q, PauliLetter::X);
            let zz = PauliOperator::from_sparse(n, &[(first, PauliLetter::Z), (q, PauliLetter::Z)]);
            self.quarter_turn(&x, &zz)?;
        }
        Ok(())
    }

    /// Record `(I + B A)/sqrt2`, the transport of a leg between
    /// anticommuting Paulis `A -> B`, as target and in the group.
    fn quarter_turn(&mut self, a: &PauliOperator, b: &PauliOperator) -> Result<()> {
        let ba = b.mul(a)?;
        let support = ba.support();
        let m = (linalg::eye(1 << support.len()) + ba.dense_on(&support)?) * c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        self.push_target(m, &support);
        // B A = i P with P Hermitian, so the leg is exp(i pi/4 P).
        self.group.track_quarter_rotation(&ba.hermitized(), 1)
    }

    /// Parity of two qubits copied onto a fresh ancilla by two C-NOTs.
    pub fn cat_parity(&mut self, sources: &[usize], ancilla: usize) -> Result<()> {
        for &s in sources {
            self.cnot(s, ancilla, &ALL_CNOT_FORMS)?;
        }
        Ok(())
    }

    /// Qubit-wise C-NOT from block `from` to block `to`, row by row. Only
    /// the Z-type forms are used, so later pairs fall back to the backward
    /// run once their target elements have spread onto earlier controls.
    pub fn transversal_cnot(&mut self, from: usize, to: usize) -> Result<()> {
        let a = self.group.block_qubits(from);
        let b = self.group.block_qubits(to);
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::InvalidProgram(format!(
                "transversal C-NOT needs two blocks of equal size, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        for (&ctl, &t) in a.iter().zip(&b) {
            self.cnot(ctl, t, &[CnotForm::Forward, CnotForm::Backward])?;
        }
        Ok(())
    }
}
