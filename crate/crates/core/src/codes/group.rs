//! Tracked stabilizer/gauge groups and starting-element search.

use serde::{Deserialize, Serialize};

use super::gf2::{self, Echelon};
use super::CodeSpec;
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::linalg::CMatrix;
use crate::pauli::{clifford_conjugate, CliffordGate, PauliLetter, PauliOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElementKind {
    Stabilizer,
    Gauge,
}

/// `|0><0|_control (x) if_zero + |1><1|_control (x) if_one`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionalElement {
    pub control: usize,
    pub if_zero: PauliOperator,
    pub if_one: PauliOperator,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupOp {
    Pauli(PauliOperator),
    Conditional(ConditionalElement),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackedElement {
    pub kind: ElementKind,
    pub op: GroupOp,
}

/// Bare logical operators of one encoded qubit; `None` once a non-Clifford
/// gate has made the operator non-Pauli.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalPair {
    pub x: Option<PauliOperator>,
    pub z: Option<PauliOperator>,
}

/// Stabilizer and gauge generators as they evolve under the compiled gates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackedGroup {
    pub n_qubits: usize,
    pub elements: Vec<TrackedElement>,
    pub logicals: Vec<LogicalPair>,
    /// Block index of each qubit.
    pub blocks: Vec<usize>,
    pub block_names: Vec<String>,
    /// Generators discarded because they stopped being Pauli operators.
    pub dropped: usize,
}

impl TrackedGroup {
    pub fn from_code(code: &CodeSpec) -> Self {
        let mut elements: Vec<TrackedElement> = code
            .stabilizers
            .iter()
            .map(|p| TrackedElement {
                kind: ElementKind::Stabilizer,
                op: GroupOp::Pauli(p.clone()),
            })
            .collect();
        elements.extend(code.gauge.iter().map(|p| TrackedElement {
            kind: ElementKind::Gauge,
            op: GroupOp::Pauli(p.clone()),
        }));
        TrackedGroup {
            n_qubits: code.n,
            elements,
            logicals: (0..code.k)
                .map(|i| LogicalPair {
                    x: Some(code.logical_x[i].clone()),
                    z: Some(code.logical_z[i].clone()),
                })
                .collect(),
            blocks: vec![0; code.n],
            block_names: vec![code.name.clone()],
            dropped: 0,
        }
    }

    /// Side-by-side union of blocks; qubits of `other` follow those of `self`.
    pub fn tensor(&self, other: &TrackedGroup) -> TrackedGroup {
        let n = self.n_qubits + other.n_qubits;
        let left: Vec<usize> = (0..self.n_qubits).collect();
        let right: Vec<usize> = (self.n_qubits..n).collect();
        let widen_op = |op: &GroupOp, map: &[usize]| match op {
            GroupOp::Pauli(p) => GroupOp::Pauli(p.embed(n, map)),
            GroupOp::Conditional(c) => GroupOp::Conditional(ConditionalElement {
                control: map[c.control],
                if_zero: c.if_zero.embed(n, map),
                if_one: c.if_one.embed(n, map),
            }),
        };
        let mut elements = Vec::new();
        for (g, map) in [(self, &left), (other, &right)] {
            elements.extend(g.elements.iter().map(|e| TrackedElement {
                kind: e.kind,
                op: widen_op(&e.op, map),
            }));
        }
        let mut logicals = Vec::new();
        for (g, map) in [(self, &left), (other, &right)] {
            logicals.extend(g.logicals.iter().map(|l| LogicalPair {
                x: l.x.as_ref().map(|p| p.embed(n, map)),
                z: l.z.as_ref().map(|p| p.embed(n, map)),
            }));
        }
        let offset = self.block_names.len();
        TrackedGroup {
            n_qubits: n,
            elements,
            logicals,
            blocks: self
                .blocks
                .iter()
                .copied()
                .chain(other.blocks.iter().map(|b| b + offset))
                .collect(),
            block_names: self.block_names.iter().chain(&other.block_names).cloned().collect(),
            dropped: self.dropped + other.dropped,
        }
    }

    pub fn blocks_of(codes: &[CodeSpec]) -> TrackedGroup {
        let mut it = codes.iter().map(TrackedGroup::from_code);
        let first = it.next().expect("at least one code");
        it.fold(first, |acc, g| acc.tensor(&g))
    }

    pub fn block_qubits(&self, block: usize) -> Vec<usize> {
        (0..self.n_qubits).filter(|&q| self.blocks[q] == block).collect()
    }

    pub fn n_blocks(&self) -> usize {
        self.block_names.len()
    }

    /// Pauli-valued elements of the given kind.
    pub fn paulis(&self, kind: Option<ElementKind>) -> Vec<PauliOperator> {
        self.elements
            .iter()
            .filter(|e| kind.is_none_or(|k| e.kind == k))
            .filter_map(|e| match &e.op {
                GroupOp::Pauli(p) => Some(p.clone()),
                GroupOp::Conditional(_) => None,
            })
            .collect()
    }

    pub fn stabilizers(&self) -> Vec<PauliOperator> {
        self.paulis(Some(ElementKind::Stabilizer))
    }

    pub fn gauge_elements(&self) -> Vec<PauliOperator> {
        self.paulis(None)
    }

    pub fn logical_x(&self) -> Vec<Option<PauliOperator>> {
        self.logicals.iter().map(|l| l.x.clone()).collect()
    }

    pub fn logical_z(&self) -> Vec<Option<PauliOperator>> {
        self.logicals.iter().map(|l| l.z.clone()).collect()
    }

    fn map_paulis(&mut self, mut f: impl FnMut(&PauliOperator) -> Result<PauliOperator>) -> Result<()> {
        for e in self.elements.iter_mut() {
            match &mut e.op {
                GroupOp::Pauli(p) => *p = f(p)?,
                GroupOp::Conditional(c) => {
                    c.if_zero = f(&c.if_zero)?;
                    c.if_one = f(&c.if_one)?;
                }
            }
        }
        for l in self.logicals.iter_mut() {
            if let Some(p) = &l.x {
                l.x = Some(f(p)?);
            }
            if let Some(p) = &l.z {
                l.z = Some(f(p)?);
            }
        }
        Ok(())
    }

    pub fn track_clifford(&mut self, gate: CliffordGate, targets: &[usize]) -> Result<()> {
        for &t in targets {
            if self.elements.iter().any(|e| matches!(&e.op, GroupOp::Conditional(c) if c.control == t)) {
                return Err(Error::Unsupported(format!(
                    "gate {} on qubit {t} which controls a conditional element",
                    gate.name()
                )));
            }
        }
        self.map_paulis(|p| clifford_conjugate(p, gate, targets))
    }

    /// Conjugation by `exp(i sign pi/4 P)` for a Hermitian Pauli `P`.
    pub fn track_quarter_rotation(&mut self, p: &PauliOperator, sign: i8) -> Result<()> {
        let p = p.clone();
        self.map_paulis(|q| {
            if q.commutes_with(&p) {
                Ok(q.clone())
            } else {
                let extra = if sign > 0 { 3 } else { 1 };
                Ok(q.mul(&p)?.times_i_pow(extra))
            }
        })
    }

    /// Track a named gate. Clifford gates conjugate every generator. A
    /// non-Clifford diagonal gate keeps generators without X or Y on its
    /// qubit; the others are combined so at most one per kind is affected,
    /// and that one is dropped.
    pub fn track_gate(&mut self, gate: Gate, targets: &[usize]) -> Result<()> {
        if targets.len() != gate.arity() || targets.iter().any(|&t| t >= self.n_qubits) {
            return Err(Error::InvalidTarget {
                gate: gate.name(),
                target: targets.to_vec(),
                n_qubits: self.n_qubits,
            });
        }
        if let Some(cl) = gate.clifford() {
            return self.track_clifford(cl, targets);
        }
        match gate {
            Gate::I => Ok(()),
            Gate::Toffoli => Err(Error::Unsupported("tracking through a Toffoli gate".into())),
            g => {
                let a = g.phase_angle().expect("diagonal");
                let quarter = a / std::f64::consts::FRAC_PI_2;
                if (quarter - quarter.round()).abs() < 1e-12 {
                    let cl = match (quarter.round() as i64).rem_euclid(4) {
                        0 => return Ok(()),
                        1 => CliffordGate::S,
                        2 => CliffordGate::Z,
                        _ => CliffordGate::Sdg,
                    };
                    return self.track_clifford(cl, targets);
                }
                self.track_non_clifford_diagonal(targets[0]);
                Ok(())
            }
        }
    }

    fn track_non_clifford_diagonal(&mut self, q: usize) {
        let has_x = |p: &PauliOperator| p.x_bits()[q];
        let affected = |kind: ElementKind, elements: &[TrackedElement]| -> Vec<usize> {
            elements
                .iter()
                .enumerate()
                .filter(|(_, e)| e.kind == kind && matches!(&e.op, GroupOp::Pauli(p) if has_x(p)))
                .map(|(i, _)| i)
                .collect()
        };
        let stabs = affected(ElementKind::Stabilizer, &self.elements);
        let gauges = affected(ElementKind::Gauge, &self.elements);
        let pivot_idx = stabs.first().or(gauges.first()).copied();
        let pivot_is_stabilizer = !stabs.is_empty();
        let pivot = pivot_idx.map(|i| match &self.elements[i].op {
            GroupOp::Pauli(p) => p.clone(),
            GroupOp::Conditional(_) => unreachable!(),
        });
        let times_pivot = |p: &PauliOperator, pv: &PauliOperator| {
            p.mul(pv).expect("same size").hermitized()
        };
        if let Some(pv) = &pivot {
            for &i in stabs.iter().chain(&gauges) {
                if Some(i) == pivot_idx {
                    continue;
                }
                if let GroupOp::Pauli(p) = &self.elements[i].op {
                    self.elements[i].op = GroupOp::Pauli(times_pivot(p, pv));
                }
            }
        }
        for l in self.logicals.iter_mut() {
            for slot in [&mut l.x, &mut l.z] {
                if let Some(p) = slot.clone() {
                    if has_x(&p) {
                        // Multiplying by a gauge pivot would leave a dressed operator.
                        *slot = match (&pivot, pivot_is_stabilizer) {
                            (Some(pv), true) => Some(times_pivot(&p, pv)),
                            _ => None,
                        };
                    }
                }
            }
        }
        let before = self.elements.len();
        self.elements.retain(|e| match &e.op {
            GroupOp::Conditional(c) => !(has_x(&c.if_zero) || has_x(&c.if_one)),
            GroupOp::Pauli(p) => !has_x(p),
        });
        self.dropped += before - self.elements.len();
    }

    /// Track a Clifford gate applied only when `control` is `|1>`.
    pub fn track_conditional(&mut self, control: usize, gate: CliffordGate, targets: &[usize]) -> Result<()> {
        if targets.contains(&control) {
            return Err(Error::InvalidTarget {
                gate: format!("conditional {}", gate.name()),
                target: targets.to_vec(),
                n_qubits: self.n_qubits,
            });
        }
        let mut kept = Vec::new();
        for e in self.elements.drain(..) {
            let op = match e.op {
                GroupOp::Pauli(p) => {
                    let img = clifford_conjugate(&p, gate, targets)?;
                    if p.x_bits()[control] {
                        // Swaps the two branches; no longer of either form.
                        None
                    } else if img == p {
                        Some(GroupOp::Pauli(p))
                    } else {
                        Some(GroupOp::Conditional(ConditionalElement {
                            control,
                            if_zero: p,
                            if_one: img,
                        }))
                    }
                }
                GroupOp::Conditional(c) if c.control == control => Some(GroupOp::Conditional(ConditionalElement {
                    if_one: clifford_conjugate(&c.if_one, gate, targets)?,
                    ..c
                })),
                GroupOp::Conditional(_) => None,
            };
            match op {
                Some(op) => kept.push(TrackedElement { kind: e.kind, op }),
                None => self.dropped += 1,
            }
        }
        self.elements = kept;
        for l in self.logicals.iter_mut() {
            for slot in [&mut l.x, &mut l.z] {
                if let Some(p) = slot.clone() {
                    if p.x_bits()[control] || clifford_conjugate(&p, gate, targets)? != p {
                        *slot = None;
                    }
                }
            }
        }
        Ok(())
    }
}

impl GroupOp {
    /// Dense matrix on the full register.
    pub fn dense(&self) -> CMatrix {
        match self {
            GroupOp::Pauli(p) => p.dense(),
            GroupOp::Conditional(c) => {
                let n = c.if_zero.n_qubits();
                let proj = |b: usize| crate::linalg::embed(&crate::linalg::basis_projector(b), &[c.control], n);
                proj(0) * c.if_zero.dense() + proj(1) * c.if_one.dense()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMethod {
    /// Enumerate the affine solution space when small, otherwise search by weight.
    Auto,
    Enumerate,
    ByWeight,
}

const ENUMERATION_DIM: usize = 16;

/// Minimum-weight Pauli element of the group acting as `desired` on `qubit`
/// and trivially on every qubit of `trivial_on`. Ties are broken by support
/// and then letters, lexicographically.
pub fn find_starting_element(
    group: &TrackedGroup,
    qubit: usize,
    desired: PauliLetter,
    trivial_on: &[usize],
) -> Result<PauliOperator> {
    find_starting_element_with(group, qubit, desired, trivial_on, SearchMethod::Auto)
}

pub fn find_starting_element_with(
    group: &TrackedGroup,
    qubit: usize,
    desired: PauliLetter,
    trivial_on: &[usize],
    method: SearchMethod,
) -> Result<PauliOperator> {
    let mut constraints = vec![(qubit, desired)];
    constraints.extend(trivial_on.iter().filter(|&&t| t != qubit).map(|&t| (t, PauliLetter::I)));
    find_element_with(group, &constraints, method)
}

/// Minimum-weight nontrivial Pauli element of the group whose factor on
/// each listed qubit is the listed letter.
pub fn find_element(group: &TrackedGroup, constraints: &[(usize, PauliLetter)]) -> Result<PauliOperator> {
    find_element_with(group, constraints, SearchMethod::Auto)
}

pub fn find_element_with(
    group: &TrackedGroup,
    constraints: &[(usize, PauliLetter)],
    method: SearchMethod,
) -> Result<PauliOperator> {
    let n = group.n_qubits;
    if constraints.is_empty() || constraints.iter().any(|&(q, _)| q >= n) {
        return Err(Error::InvalidTarget {
            gate: "find_starting_element".into(),
            target: constraints.iter().map(|&(q, _)| q).collect(),
            n_qubits: n,
        });
    }
    let (qubit, desired) = constraints[0];
    let gens = group.gauge_elements();
    let rows: Vec<Vec<bool>> = gens.iter().map(|p| p.symplectic()).collect();
    let echelon = Echelon::from_rows(&rows);
    let not_found = || Error::NoStartingElement {
        qubit,
        desired: desired.as_char(),
    };

    let mut constrained: Vec<(usize, bool)> = Vec::new();
    for &(q, l) in constraints {
        let (x, z) = l.bits();
        constrained.push((q, x));
        constrained.push((n + q, z));
    }

    // Independent basis of the group as symplectic vectors.
    let mut basis: Vec<Vec<bool>> = Vec::new();
    let mut check = Echelon::new();
    for r in &rows {
        if check.insert(r) {
            basis.push(r.clone());
        }
    }
    let columns: Vec<Vec<bool>> = basis
        .iter()
        .map(|b| constrained.iter().map(|&(pos, _)| b[pos]).collect())
        .collect();
    let target: Vec<bool> = constrained.iter().map(|&(_, v)| v).collect();
    let Some((particular, null)) = gf2::solve_affine(&columns, &target) else {
        return Err(not_found());
    };

    let use_enumeration = match method {
        SearchMethod::Enumerate => true,
        SearchMethod::ByWeight => false,
        SearchMethod::Auto => null.len() <= ENUMERATION_DIM,
    };
    let best = if use_enumeration {
        enumerate_min(&basis, &particular, &null, n)
    } else {
        search_by_weight(&echelon, constraints, n)
    };
    let bits = best.ok_or_else(not_found)?;
    // Rebuild the element, with its sign, as a product of generators.
    let combo = echelon.solve(&bits).expect("element lies in the group");
    let mut op = PauliOperator::identity(n);
    for (i, used) in combo.iter().enumerate() {
        if *used {
            op = op.mul(&gens[i])?;
        }
    }
    Ok(op.hermitized())
}

fn key_of(bits: &[bool]) -> (usize, Vec<usize>, Vec<PauliLetter>) {
    PauliOperator::from_symplectic(bits).canonical_key()
}

fn enumerate_min(basis: &[Vec<bool>], particular: &[bool], null: &[Vec<bool>], n: usize) -> Option<Vec<bool>> {
    let combine = |coeffs: &[bool]| {
        let mut v = vec![false; 2 * n];
        for (i, used) in coeffs.iter().enumerate() {
            if *used {
                gf2::xor_into(&mut v, &basis[i]);
            }
        }
        v
    };
    let mut v = combine(particular);
    let steps: Vec<Vec<bool>> = null.iter().map(|c| combine(c)).collect();
    let weight = |v: &[bool]| (0..n).filter(|&q| v[q] || v[n + q]).count();
    let mut best: Option<(usize, Vec<bool>)> = None;
    let mut consider = |v: &Vec<bool>| {
        let w = weight(v);
        if w == 0 {
            return;
        }
        match &best {
            Some((bw, bv)) if w > *bw || (w == *bw && key_of(v) >= key_of(bv)) => {}
            _ => best = Some((w, v.clone())),
        }
    };
    consider(&v);
    // Gray-code walk over the null space.
    let total: u64 = 1u64 << steps.len();
    for k in 1..total {
        let flip = k.trailing_zeros() as usize;
        gf2::xor_into(&mut v, &steps[flip]);
        consider(&v);
    }
    best.map(|(_, v)| v)
}

fn search_by_weight(echelon: &Echelon, constraints: &[(usize, PauliLetter)], n: usize) -> Option<Vec<bool>> {
    let others: Vec<usize> = (0..n).filter(|q| constraints.iter().all(|&(c, _)| c != *q)).collect();
    let fixed = constraints.iter().filter(|&&(_, l)| l != PauliLetter::I).count();
    for w in fixed.max(1)..=n {
        let free_count = w - fixed;
        if free_count > others.len() {
            break;
        }
        let mut hits: Vec<Vec<bool>> = Vec::new();
        for combo in combinations(others.len(), free_count) {
            let free: Vec<usize> = combo.iter().map(|&i| others[i]).collect();
            let total = 3usize.pow(free.len() as u32);
            for code in 0..total {
                let mut p = PauliOperator::identity(n);
                for &(q, l) in constraints {
                    p.set_letter(q, l);
                }
                let mut c = code;
                for &q in free.iter().rev() {
                    p.set_letter(q, PauliLetter::NONTRIVIAL[c % 3]);
                    c /= 3;
                }
                let bits = p.symplectic();
                if echelon.contains(&bits) {
                    hits.push(bits);
                }
            }
        }
        if let Some(best) = hits.into_iter().min_by_key(|b| key_of(b)) {
            return Some(best);
        }
    }
    None
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
