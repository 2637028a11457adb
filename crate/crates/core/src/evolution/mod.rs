//! Interpolation segments, exact adiabatic transport and finite-time
//! evolution.
//!
//! A segment is `H(t) = - sum_b Pi_b (x) alpha_b(t) (f(t) A_b + g(t) B_b)`
//! where `Pi_b` projects the control qubits onto bit pattern `b`. With no
//! controls there is a single branch and no projector.

pub mod ode;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, C64};
use crate::pauli::{PauliLetter, PauliOperator, PauliSum};
use crate::schedules::{gauss_legendre, Schedule};
pub use ode::Integrator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentForm {
    /// `-(f A + g B)` with Pauli endpoints.
    Single,
    /// Branches selected by control qubits of the register.
    Controlled,
    /// Branches selected by a control qubit that belongs to a cat state.
    ConditionalGroup,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub start: PauliSum,
    pub end: PauliSum,
    /// Rescale so the branch Hamiltonian keeps unit spectrum along the path.
    #[serde(default)]
    pub normalize: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentHamiltonian {
    pub label: String,
    pub form: SegmentForm,
    pub n_qubits: usize,
    /// Qubits the segment is meant to act on (informational).
    pub targets: Vec<usize>,
    pub controls: Vec<usize>,
    /// `2^controls.len()` branches; the first control is the high bit.
    pub branches: Vec<Branch>,
    #[serde(default)]
    pub theta: Option<f64>,
    pub direction: Direction,
    pub schedule: Schedule,
}

impl SegmentHamiltonian {
    /// `-(f A + g B)` between two Hermitian Pauli sums.
    pub fn single(label: &str, targets: &[usize], start: PauliSum, end: PauliSum, schedule: &Schedule) -> Self {
        SegmentHamiltonian {
            label: label.to_string(),
            form: SegmentForm::Single,
            n_qubits: start.n_qubits(),
            targets: targets.to_vec(),
            controls: Vec::new(),
            branches: vec![Branch {
                start,
                end,
                normalize: false,
            }],
            theta: None,
            direction: Direction::Forward,
            schedule: schedule.clone(),
        }
    }

    pub fn branched(
        label: &str,
        form: SegmentForm,
        targets: &[usize],
        controls: &[usize],
        branches: Vec<Branch>,
        schedule: &Schedule,
    ) -> Self {
        SegmentHamiltonian {
            label: label.to_string(),
            form,
            n_qubits: branches[0].start.n_qubits(),
            targets: targets.to_vec(),
            controls: controls.to_vec(),
            branches,
            theta: None,
            direction: Direction::Forward,
            schedule: schedule.clone(),
        }
    }

    pub fn reversed(mut self) -> Self {
        self.direction = match self.direction {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        };
        self
    }

    pub fn with_theta(mut self, theta: Option<f64>) -> Self {
        self.theta = theta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidProgram(format!("segment {}: {msg}", self.label)));
        if self.branches.len() != 1 << self.controls.len() {
            return bad("branch count must be 2^controls");
        }
        for b in &self.branches {
            if b.start.n_qubits() != self.n_qubits || b.end.n_qubits() != self.n_qubits {
                return bad("branch operators have the wrong register size");
            }
            if b.start.is_zero() && b.end.is_zero() {
                return bad("empty branch");
            }
            for s in [&b.start, &b.end] {
                if s.support().iter().any(|q| self.controls.contains(q)) {
                    return bad("branch operators must act trivially on the controls");
                }
            }
        }
        if self.controls.iter().any(|&q| q >= self.n_qubits) {
            return bad("control out of range");
        }
        Ok(())
    }

    /// Qubits on which the Hamiltonian acts, sorted.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self
            .branches
            .iter()
            .flat_map(|b| b.start.support().into_iter().chain(b.end.support()))
            .chain(self.controls.iter().copied())
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Path parameter for the time fraction `u`, after direction.
    pub fn s_at(&self, u: f64) -> f64 {
        let t = match self.direction {
            Direction::Forward => u,
            Direction::Backward => 1.0 - u,
        } * self.schedule.duration;
        self.schedule.s_of_t(t)
    }

    fn alpha(b: &Branch, f: f64, g: f64) -> f64 {
        if !b.normalize {
            return 1.0;
        }
        let k = b.start.scaled(f).plus(&b.end.scaled(g)).expect("same size");
        let nrm = k.terms().iter().map(|(x, _)| x * x).sum::<f64>().sqrt();
        if nrm > 0.0 {
            1.0 / nrm
        } else {
            1.0
        }
    }

    /// The full Hamiltonian at time fraction `u` as a Pauli sum.
    pub fn expanded(&self, u: f64) -> PauliSum {
        let (f, g) = self.schedule.interpolation.fg(self.s_at(u));
        let k = self.controls.len();
        let mut total = PauliSum::zero(self.n_qubits);
        for mask in 0..(1usize << k) {
            let mut zs = PauliOperator::identity(self.n_qubits);
            for (i, &q) in self.controls.iter().enumerate() {
                if mask >> (k - 1 - i) & 1 == 1 {
                    zs.set_letter(q, PauliLetter::Z);
                }
            }
            for (b, branch) in self.branches.iter().enumerate() {
                let sign = if (b & mask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                let a = Self::alpha(branch, f, g);
                let w = -sign * a / (1usize << k) as f64;
                for (coef, p) in branch.start.terms() {
                    total.add_term(w * f * coef, &zs.mul(p).expect("same size").hermitized()).expect("hermitian");
                }
                for (coef, p) in branch.end.terms() {
                    total.add_term(w * g * coef, &zs.mul(p).expect("same size").hermitized()).expect("hermitian");
                }
            }
        }
        total
    }

    /// Operator `A` or `B` of a single-branch segment as a signed Pauli.
    pub fn endpoint(&self, which_end: bool) -> Option<PauliOperator> {
        if self.branches.len() != 1 {
            return None;
        }
        let b = &self.branches[0];
        if which_end {
            b.end.as_single()
        } else {
            b.start.as_single()
        }
    }

    /// `G~`: the starting operator with the factor on the first target removed.
    pub fn g_tilde(&self) -> Option<PauliOperator> {
        let p = self.endpoint(false)?;
        Some(p.without(*self.targets.first()?))
    }

    pub fn local_model(&self) -> Result<LocalModel> {
        self.validate()?;
        let support = self.support();
        let k = self.controls.len();
        let ctrl_pos: Vec<usize> = self
            .controls
            .iter()
            .map(|q| support.iter().position(|s| s == q).unwrap())
            .collect();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (idx, branch) in self.branches.iter().enumerate() {
            let mut proj = linalg::eye(1 << support.len());
            for (i, &pos) in ctrl_pos.iter().enumerate() {
                let bit = idx >> (k - 1 - i) & 1;
                proj = linalg::embed(&linalg::basis_projector(bit), &[pos], support.len()) * proj;
            }
            a.push(&proj * branch.start.local_matrix(&support)?);
            b.push(&proj * branch.end.local_matrix(&support)?);
        }
        Ok(LocalModel {
            support,
            a,
            b,
            branches: self.branches.clone(),
            schedule: self.schedule.clone(),
            direction: self.direction,
            label: self.label.clone(),
            strict_degeneracy: self.form != SegmentForm::Single,
        })
    }
}

/// Dense local form of a segment, cheap to evaluate along the path.
#[derive(Clone, Debug)]
pub struct LocalModel {
    pub support: Vec<usize>,
    a: Vec<CMatrix>,
    b: Vec<CMatrix>,
    branches: Vec<Branch>,
    schedule: Schedule,
    direction: Direction,
    label: String,
    strict_degeneracy: bool,
}

impl LocalModel {
    fn s_at(&self, u: f64) -> f64 {
        let t = match self.direction {
            Direction::Forward => u,
            Direction::Backward => 1.0 - u,
        } * self.schedule.duration;
        self.schedule.s_of_t(t)
    }

    /// Local Hamiltonian at time fraction `u`.
    pub fn at(&self, u: f64) -> CMatrix {
        let (f, g) = self.schedule.interpolation.fg(self.s_at(u));
        let d = self.a[0].nrows();
        let mut h = CMatrix::zeros(d, d);
        for i in 0..self.a.len() {
            let al = SegmentHamiltonian::alpha(&self.branches[i], f, g);
            h -= &self.a[i] * c(al * f, 0.0) + &self.b[i] * c(al * g, 0.0);
        }
        h
    }

    pub fn duration(&self) -> f64 {
        self.schedule.duration
    }

    /// Eigen-clusters of the Hamiltonian at `u`: (mean energy, projector).
    pub fn clusters(&self, u: f64) -> Result<Vec<(f64, CMatrix)>> {
        let h = self.at(u);
        let (vals, vecs) = linalg::eigh(&h);
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale < 1e-12 {
            return Err(Error::GapClosed {
                label: self.label.clone(),
                at: u,
            });
        }
        let mut groups: Vec<Vec<usize>> = vec![vec![0]];
        for i in 1..vals.len() {
            if vals[i] - vals[i - 1] > 1e-6 * scale {
                groups.push(vec![i]);
            } else {
                groups.last_mut().unwrap().push(i);
            }
        }
        let spread = |g: &[usize]| vals[*g.last().unwrap()] - vals[g[0]];
        let worst = groups.iter().map(|g| spread(g)).fold(0.0, f64::max);
        if worst > 1e-10 * scale.max(1.0) {
            return Err(Error::DegeneracyBroken {
                label: self.label.clone(),
                spread: worst,
            });
        }
        if self.strict_degeneracy && groups.len() != 2 {
            let neg: Vec<f64> = vals.iter().copied().filter(|v| *v < 0.0).collect();
            let pos: Vec<f64> = vals.iter().copied().filter(|v| *v >= 0.0).collect();
            let range = |v: &[f64]| v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min);
            return Err(Error::DegeneracyBroken {
                label: self.label.clone(),
                spread: range(&neg).max(range(&pos)).max(0.0),
            });
        }
        Ok(groups
            .into_iter()
            .map(|g| {
                let mean = g.iter().map(|&i| vals[i]).sum::<f64>() / g.len() as f64;
                let cols = vecs.select_columns(&g);
                (mean, &cols * cols.adjoint())
            })
            .collect())
    }
}

/// A unitary acting on a list of register qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalUnitary {
    pub qubits: Vec<usize>,
    pub matrix: CMatrix,
}

impl LocalUnitary {
    pub fn identity() -> Self {
        LocalUnitary {
            qubits: Vec::new(),
            matrix: linalg::eye(1),
        }
    }

    /// Same operator written on `support`, which must contain `self.qubits`.
    pub fn on(&self, support: &[usize]) -> CMatrix {
        linalg::widen(&self.matrix, &self.qubits, support)
    }

    pub fn apply(&self, state: &mut [C64], n: usize) {
        linalg::apply_local(state, n, &self.qubits, &self.matrix);
    }

    /// `other * self` on the union of supports.
    pub fn then(&self, other: &LocalUnitary) -> LocalUnitary {
        let mut qubits: Vec<usize> = self.qubits.iter().chain(&other.qubits).copied().collect();
        qubits.sort_unstable();
        qubits.dedup();
        LocalUnitary {
            matrix: other.on(&qubits) * self.on(&qubits),
            qubits,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportOptions {
    pub initial_steps: usize,
    pub max_steps: usize,
    /// Max-abs change between step counts `N` and `2N` accepted as converged.
    pub tol: f64,
}

impl Default for TransportOptions {
    fn default() -> Self {
        TransportOptions {
            initial_steps: 64,
            max_steps: 1 << 16,
            tol: 1e-10,
        }
    }
}

/// Result of transporting all eigenspaces of a segment.
#[derive(Clone, Debug)]
pub struct Transport {
    pub unitary: LocalUnitary,
    pub start_projectors: Vec<CMatrix>,
    pub end_projectors: Vec<CMatrix>,
    pub steps: usize,
}

fn transport_grid(model: &LocalModel, u0: f64, u1: f64, steps: usize) -> Result<(CMatrix, Vec<CMatrix>, Vec<CMatrix>)> {
    let first = model.clusters(u0)?;
    let mut prev: Vec<CMatrix> = first.iter().map(|(_, p)| p.clone()).collect();
    let start = prev.clone();
    let d = prev[0].nrows();
    let mut u = linalg::eye(d);
    for k in 1..=steps {
        let uk = u0 + (u1 - u0) * k as f64 / steps as f64;
        let next: Vec<CMatrix> = model.clusters(uk)?.into_iter().map(|(_, p)| p).collect();
        let same_shape = next.len() == prev.len()
            && next
                .iter()
                .zip(&prev)
                .all(|(a, b)| (a.trace().re - b.trace().re).abs() < 1e-6);
        if !same_shape {
            return Err(Error::GapClosed {
                label: model.label.clone(),
                at: uk,
            });
        }
        let mut x = CMatrix::zeros(d, d);
        for (pn, pp) in next.iter().zip(&prev) {
            x += pn * pp;
        }
        u = linalg::polar(&x) * u;
        prev = next;
    }
    Ok((u, start, prev))
}

/// Transport of every eigenspace along the time-fraction interval
/// `[u0, u1]`, refined until halving the step changes the result by less
/// than `opts.tol`.
pub fn transport_interval(seg: &SegmentHamiltonian, u0: f64, u1: f64, opts: &TransportOptions) -> Result<Transport> {
    let model = seg.local_model()?;
    transport_model(&model, u0, u1, opts)
}

pub fn transport_model(model: &LocalModel, u0: f64, u1: f64, opts: &TransportOptions) -> Result<Transport> {
    if (u1 - u0).abs() < 1e-15 {
        let cl = model.clusters(u0)?;
        let ps: Vec<CMatrix> = cl.into_iter().map(|(_, p)| p).collect();
        return Ok(Transport {
            unitary: LocalUnitary {
                qubits: model.support.clone(),
                matrix: linalg::eye(ps[0].nrows()),
            },
            start_projectors: ps.clone(),
            end_projectors: ps,
            steps: 0,
        });
    }
    let mut steps = opts.initial_steps.max(1);
    let (mut prev, _, _) = transport_grid(model, u0, u1, steps)?;
    loop {
        steps *= 2;
        let (next, start, end) = transport_grid(model, u0, u1, steps)?;
        let change = linalg::max_abs(&(&next - &prev));
        if change < opts.tol {
            log::debug!("transport {} converged at {} steps (change {:.2e})", model.label, steps, change);
            return Ok(Transport {
                unitary: LocalUnitary {
                    qubits: model.support.clone(),
                    matrix: next,
                },
                start_projectors: start,
                end_projectors: end,
                steps,
            });
        }
        if steps >= opts.max_steps {
            return Err(Error::NotConverged { change, steps });
        }
        prev = next;
    }
}

/// Geometric unitary of a whole segment in the adiabatic limit.
pub fn exact_adiabatic_transport(seg: &SegmentHamiltonian) -> Result<LocalUnitary> {
    Ok(transport_interval(seg, 0.0, 1.0, &TransportOptions::default())?.unitary)
}

/// Integrated cluster energies `omega_n = int lambda_n dt` over the segment.
pub fn dynamical_phases(model: &LocalModel, u0: f64, u1: f64) -> Result<Vec<f64>> {
    let panels = 256;
    let m = model.clusters(u0)?.len();
    let mut omega = vec![0.0; m];
    let t = model.duration();
    for p in 0..panels {
        let a = u0 + (u1 - u0) * p as f64 / panels as f64;
        let b = u0 + (u1 - u0) * (p + 1) as f64 / panels as f64;
        for (n, om) in omega.iter_mut().enumerate() {
            *om += t * gauss_legendre(
                |u| model.clusters(u).map(|cl| cl[n].0).unwrap_or(f64::NAN),
                a,
                b,
            );
        }
    }
    if omega.iter().any(|w| !w.is_finite()) {
        return Err(Error::GapClosed {
            label: model.label.clone(),
            at: u0,
        });
    }
    Ok(omega)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionOptions {
    pub integrator: Integrator,
    pub tol: f64,
    /// Refuse to extract a geometric part above this leakage.
    pub max_diabatic: f64,
}

impl Default for EvolutionOptions {
    fn default() -> Self {
        EvolutionOptions {
            integrator: Integrator::Magnus4,
            tol: 1e-10,
            max_diabatic: 0.05,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EvolutionResult {
    /// Full propagator `U(T)`.
    pub unitary: LocalUnitary,
    /// `U(T)` with the dynamical phase of each starting eigenspace removed.
    pub phase_stripped: LocalUnitary,
    /// Unitarized projection onto the adiabatic eigenspace maps.
    pub geometric: LocalUnitary,
    pub dynamical_phases: Vec<f64>,
    /// Largest leakage probability out of any transported eigenspace.
    pub diabatic_error: f64,
}

/// Finite-time evolution of a segment under its own schedule.
pub fn evolve_segment(seg: &SegmentHamiltonian, opts: &EvolutionOptions) -> Result<EvolutionResult> {
    let model = seg.local_model()?;
    let t = model.duration();
    let h = |time: f64| model.at(time / t);
    let u = ode::integrate(&h, 0.0, t, opts.integrator, opts.tol)?;
    let start = model.clusters(0.0)?;
    let end = model.clusters(1.0)?;
    let omega = dynamical_phases(&model, 0.0, 1.0)?;
    let d = u.nrows();
    let mut geo = CMatrix::zeros(d, d);
    let mut strip = CMatrix::zeros(d, d);
    let mut delta: f64 = 0.0;
    for (n, ((_, p0), (_, p1))) in start.iter().zip(&end).enumerate() {
        let ph = C64::from_polar(1.0, omega[n]);
        geo += p1 * &u * p0 * ph;
        strip += &u * p0 * ph;
        let leak = (linalg::eye(d) - p1) * &u * p0;
        delta = delta.max(linalg::operator_norm(&leak).powi(2));
    }
    if delta > opts.max_diabatic {
        return Err(Error::TooDiabatic { delta });
    }
    let q = model.support.clone();
    Ok(EvolutionResult {
        unitary: LocalUnitary {
            qubits: q.clone(),
            matrix: u,
        },
        phase_stripped: LocalUnitary {
            qubits: q.clone(),
            matrix: strip,
        },
        geometric: LocalUnitary {
            qubits: q,
            matrix: linalg::polar(&geo),
        },
        dynamical_phases: omega,
        diabatic_error: delta,
    })
}

/// Two-level interpolation `H(t) = f(t) (a . sigma) + g(t) (b . sigma)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelFamily {
    pub start: [f64; 3],
    pub end: [f64; 3],
}

impl TwoLevelFamily {
    pub fn field(&self, schedule: &Schedule, t: f64) -> [f64; 3] {
        let (f, g) = schedule.fg(t);
        [
            f * self.start[0] + g * self.end[0],
            f * self.start[1] + g * self.end[1],
            f * self.start[2] + g * self.end[2],
        ]
    }
}

/// Propagators `(U0, U1)` of `-H(t)` and `+H(t)`: the two blocks of
/// `-H (x) G~` on the `G~ = +1` and `G~ = -1` eigenspaces.
pub fn evolve_two_level(family: &TwoLevelFamily, schedule: &Schedule, tol: f64) -> Result<(CMatrix, CMatrix)> {
    let minus = |t: f64| -linalg::bloch_operator(family.field(schedule, t));
    let plus = |t: f64| linalg::bloch_operator(family.field(schedule, t));
    Ok((
        ode::integrate(&minus, 0.0, schedule.duration, Integrator::Magnus4, tol)?,
        ode::integrate(&plus, 0.0, schedule.duration, Integrator::Magnus4, tol)?,
    ))
}

/// `U0 (x) (I + G~)/2 + U1 (x) (I - G~)/2`, the target qubit first.
pub fn assemble_full(u0: &CMatrix, u1: &CMatrix, g_tilde: &PauliOperator, limits: &linalg::Limits) -> Result<CMatrix> {
    if !g_tilde.is_hermitian() {
        return Err(Error::Endpoints {
            label: format!("G~ = {g_tilde}"),
        });
    }
    limits.check_dense("assemble_full", 1 + g_tilde.n_qubits())?;
    let g = g_tilde.dense();
    let id = linalg::eye(g.nrows());
    let p0 = (&id + &g) * c(0.5, 0.0);
    let p1 = (&id - &g) * c(0.5, 0.0);
    Ok(linalg::kron(u0, &p0) + linalg::kron(u1, &p1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn z_to_x_is_the_quarter_rotation_about_y() {
        let seg = SegmentHamiltonian::single(
            "zx",
            &[0],
            PauliSum::from_pauli(&p("Z")).unwrap(),
            PauliSum::from_pauli(&p("X")).unwrap(),
            &Schedule::linear(1.0),
        );
        let u = exact_adiabatic_transport(&seg).unwrap();
        let s = FRAC_1_SQRT_2;
        let expected = CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(-s, 0.0), c(s, 0.0), c(s, 0.0)]);
        assert!(linalg::max_abs(&(u.matrix - expected)) < 1e-10);
    }

    #[test]
    fn expanded_controlled_segment_has_control_z() {
        let b0 = Branch {
            start: PauliSum::from_pauli(&p("IY")).unwrap(),
            end: PauliSum::from_pauli(&p("IZ")).unwrap(),
            normalize: false,
        };
        let b1 = Branch {
            start: PauliSum::from_pauli(&p("IY")).unwrap(),
            end: PauliSum::from_pauli(&p("-IZ")).unwrap(),
            normalize: false,
        };
        let seg = SegmentHamiltonian::branched("c", SegmentForm::Controlled, &[1], &[0], vec![b0, b1], &Schedule::linear(1.0));
        let start = seg.expanded(0.0);
        assert_eq!(start.as_single().unwrap(), p("-IY"));
        let end = seg.expanded(1.0);
        assert_eq!(end.as_single().unwrap(), p("-ZZ"));
        assert_eq!(seg.expanded(0.5).weight(), 2);
    }
}
