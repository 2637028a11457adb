//! Stabilizer and subsystem codes.

pub mod gf2;
mod group;

pub use group::{
    find_element, find_element_with, find_starting_element, find_starting_element_with, ConditionalElement, ElementKind, GroupOp, LogicalPair,
    SearchMethod, TrackedElement, TrackedGroup,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{PauliLetter, PauliOperator};
use gf2::Echelon;

/// Row/column coordinates of a square qubit array, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridLayout {
    pub rows: usize,
    pub cols: usize,
}

impl GridLayout {
    /// Qubit index of `(row, col)`, row-major, 1-based coordinates.
    pub fn index(&self, row: usize, col: usize) -> usize {
        assert!((1..=self.rows).contains(&row) && (1..=self.cols).contains(&col));
        self.cols * (row - 1) + (col - 1)
    }

    pub fn coords(&self, q: usize) -> (usize, usize) {
        (q / self.cols + 1, q % self.cols + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub stabilizers: Vec<PauliOperator>,
    pub gauge: Vec<PauliOperator>,
    pub logical_x: Vec<PauliOperator>,
    pub logical_z: Vec<PauliOperator>,
    #[serde(default)]
    pub layout: Option<GridLayout>,
}

fn line(n: usize, letter: PauliLetter, qubits: &[usize]) -> PauliOperator {
    let factors: Vec<(usize, PauliLetter)> = qubits.iter().map(|&q| (q, letter)).collect();
    PauliOperator::from_sparse(n, &factors)
}

/// The `m x m` Bacon-Shor subsystem code.
pub fn build_bacon_shor(m: usize) -> CodeSpec {
    assert!(m >= 2);
    let n = m * m;
    let grid = GridLayout { rows: m, cols: m };
    let q = |r: usize, c: usize| grid.index(r, c);
    let mut gauge = Vec::new();
    for r in 1..=m {
        for c in 1..m {
            gauge.push(line(n, PauliLetter::Z, &[q(r, c), q(r, c + 1)]));
        }
    }
    for c in 1..=m {
        for r in 1..m {
            gauge.push(line(n, PauliLetter::X, &[q(r, c), q(r + 1, c)]));
        }
    }
    let mut stabilizers = Vec::new();
    for c in 1..m {
        let qs: Vec<usize> = (1..=m).flat_map(|r| [q(r, c), q(r, c + 1)]).collect();
        stabilizers.push(line(n, PauliLetter::Z, &qs));
    }
    for r in 1..m {
        let qs: Vec<usize> = (1..=m).flat_map(|c| [q(r, c), q(r + 1, c)]).collect();
        stabilizers.push(line(n, PauliLetter::X, &qs));
    }
    let column: Vec<usize> = (1..=m).map(|r| q(r, 1)).collect();
    let row: Vec<usize> = (1..=m).map(|c| q(1, c)).collect();
    CodeSpec {
        name: format!("bacon-shor-{n}"),
        n,
        k: 1,
        r: (m - 1) * (m - 1),
        stabilizers,
        gauge,
        logical_x: vec![line(n, PauliLetter::X, &row)],
        logical_z: vec![line(n, PauliLetter::Z, &column)],
        layout: Some(grid),
    }
}

impl CodeSpec {
    /// `n` fresh qubits in `|0...0>`: stabilizers `Z_j`, no logical qubits.
    pub fn fresh(n: usize) -> Self {
        CodeSpec {
            name: format!("fresh-{n}"),
            n,
            k: 0,
            r: 0,
            stabilizers: (0..n).map(|q| PauliOperator::single(n, q, PauliLetter::Z)).collect(),
            gauge: Vec::new(),
            logical_x: Vec::new(),
            logical_z: Vec::new(),
            layout: None,
        }
    }

    /// An `m`-qubit cat state `(|0..0> + |1..1>)/sqrt2`.
    pub fn cat(m: usize) -> Self {
        let mut stabilizers: Vec<PauliOperator> = (1..m)
            .map(|j| line(m, PauliLetter::Z, &[j - 1, j]))
            .collect();
        stabilizers.push(line(m, PauliLetter::X, &(0..m).collect::<Vec<_>>()));
        CodeSpec {
            name: format!("cat-{m}"),
            n: m,
            k: 0,
            r: 0,
            stabilizers,
            gauge: Vec::new(),
            logical_x: Vec::new(),
            logical_z: Vec::new(),
            layout: None,
        }
    }

    /// The `[[4,2,2]]` code.
    pub fn four_two_two() -> Self {
        let p = |s: &str| s.parse::<PauliOperator>().unwrap();
        CodeSpec {
            name: "four-two-two".into(),
            n: 4,
            k: 2,
            r: 0,
            stabilizers: vec![p("XXXX"), p("ZZZZ")],
            gauge: Vec::new(),
            logical_x: vec![p("XXII"), p("XIXI")],
            logical_z: vec![p("ZIZI"), p("ZZII")],
            layout: None,
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "bacon-shor-9" | "bacon-shor" | "bs9" => Ok(build_bacon_shor(3)),
            "bacon-shor-4" => Ok(build_bacon_shor(2)),
            "four-two-two" => Ok(Self::four_two_two()),
            "trivial" | "fresh-1" => Ok(Self::fresh(1)),
            other => {
                if let Some(m) = other.strip_prefix("cat-").and_then(|m| m.parse().ok()) {
                    Ok(Self::cat(m))
                } else if let Some(path) = other.strip_prefix("file:") {
                    let code: CodeSpec = serde_json::from_str(&std::fs::read_to_string(path)?)?;
                    code.validate()?;
                    Ok(code)
                } else {
                    Err(Error::InvalidCode(format!("unknown code {other:?}")))
                }
            }
        }
    }

    /// Generators of the gauge group, stabilizers included.
    pub fn gauge_group(&self) -> Vec<PauliOperator> {
        self.gauge.iter().chain(&self.stabilizers).cloned().collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidCode(format!("{}: {msg}", self.name)));
        let all: Vec<&PauliOperator> = self
            .stabilizers
            .iter()
            .chain(&self.gauge)
            .chain(&self.logical_x)
            .chain(&self.logical_z)
            .collect();
        if let Some(p) = all.iter().find(|p| p.n_qubits() != self.n || !p.is_hermitian()) {
            return bad(format!("{p} is not a Hermitian operator on {} qubits", self.n));
        }
        for (i, s) in self.stabilizers.iter().enumerate() {
            for other in all.iter() {
                if !s.commutes_with(other) {
                    return bad(format!("stabilizer {i} anticommutes with {other}"));
                }
            }
        }
        for l in self.logical_x.iter().chain(&self.logical_z) {
            if let Some(g) = self.gauge.iter().find(|g| !l.commutes_with(g)) {
                return bad(format!("logical {l} anticommutes with gauge {g}"));
            }
        }
        if self.logical_x.len() != self.k || self.logical_z.len() != self.k {
            return bad(format!("expected {} logical pairs", self.k));
        }
        for i in 0..self.k {
            for j in 0..self.k {
                let anti = !self.logical_x[i].commutes_with(&self.logical_z[j]);
                if anti != (i == j) {
                    return bad(format!("logical pair ({i},{j}) has wrong commutation"));
                }
                if !self.logical_x[i].commutes_with(&self.logical_x[j])
                    || !self.logical_z[i].commutes_with(&self.logical_z[j])
                {
                    return bad(format!("logicals {i},{j} of the same type anticommute"));
                }
            }
        }
        let stab = Echelon::from_rows(&self.stabilizers.iter().map(|p| p.symplectic()).collect::<Vec<_>>());
        if stab.rank() != self.stabilizers.len() {
            return bad("stabilizer generators are dependent".into());
        }
        if stab.rank() + self.k + self.r != self.n {
            return bad(format!(
                "{} stabilizers, expected n - k - r = {}",
                stab.rank(),
                self.n as isize - self.k as isize - self.r as isize
            ));
        }
        let gauge_rows: Vec<Vec<bool>> = self.gauge_group().iter().map(|p| p.symplectic()).collect();
        let gauge = Echelon::from_rows(&gauge_rows);
        if gauge.rank() - stab.rank() != 2 * self.r {
            return bad(format!(
                "gauge group has {} independent generators beyond the stabilizers, expected {}",
                gauge.rank() - stab.rank(),
                2 * self.r
            ));
        }
        if self.r > 0 {
            if let Some(s) = self
                .stabilizers
                .iter()
                .find(|s| !Echelon::from_rows(&self.gauge.iter().map(|p| p.symplectic()).collect::<Vec<_>>()).contains(&s.symplectic()))
            {
                return bad(format!("stabilizer {s} is not generated by the gauge operators"));
            }
        }
        for l in self.logical_x.iter().chain(&self.logical_z) {
            if gauge.contains(&l.symplectic()) {
                return bad(format!("logical {l} lies in the gauge group"));
            }
        }
        Ok(())
    }
}

/// Correctability of an error set: every product `E_a^dagger E_b` either
/// anticommutes with a stabilizer or lies in the gauge group.
pub fn check_correctable(code: &CodeSpec, errors: &[PauliOperator]) -> Result<bool> {
    let gauge = Echelon::from_rows(&code.gauge_group().iter().map(|p| p.symplectic()).collect::<Vec<_>>());
    for e in errors {
        if e.n_qubits() != code.n {
            return Err(Error::LengthMismatch {
                left: code.n,
                right: e.n_qubits(),
            });
        }
    }
    for (a, ea) in errors.iter().enumerate() {
        for eb in &errors[a..] {
            let prod = ea.mul(eb)?;
            let detected = code.stabilizers.iter().any(|s| !s.commutes_with(&prod));
            if !detected && !gauge.contains(&prod.symplectic()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn builtin_codes_validate() {
        build_bacon_shor(3).validate().unwrap();
        build_bacon_shor(2).validate().unwrap();
        CodeSpec::four_two_two().validate().unwrap();
        CodeSpec::cat(4).validate().unwrap();
        CodeSpec::fresh(3).validate().unwrap();
    }

    #[test]
    fn broken_code_is_rejected() {
        let mut code = build_bacon_shor(3);
        code.stabilizers[0] = "ZIIIIIIII".parse().unwrap();
        assert!(code.validate().is_err());
        let mut code = build_bacon_shor(3);
        code.stabilizers.pop();
        assert!(code.validate().is_err());
    }

    #[test]
    fn grid_indexing() {
        let g = GridLayout { rows: 3, cols: 3 };
        assert_eq!(g.index(1, 1), 0);
        assert_eq!(g.index(2, 3), 5);
        assert_eq!(g.coords(7), (3, 2));
    }

    /// Dense projector onto the code space.
    fn code_projector(code: &CodeSpec) -> crate::linalg::CMatrix {
        let d = 1 << code.n;
        let id = crate::linalg::eye(d);
        code.stabilizers.iter().fold(id.clone(), |acc, s| acc * (&id + s.dense()) * crate::linalg::c(0.5, 0.0))
    }

    fn error_set() -> impl Strategy<Value = Vec<PauliOperator>> {
        let one = (0..4usize, 0..4usize, 1..4usize, 0..4usize).prop_map(|(a, b, la, lb)| {
            let mut p = PauliOperator::identity(4);
            p.set_letter(a, PauliLetter::ALL[la]);
            if a != b {
                p.set_letter(b, PauliLetter::ALL[lb]);
            }
            p
        });
        prop::collection::vec(one, 1..4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Stabilizer-code condition `P Ea Eb P = c P` against the symplectic check.
        #[test]
        fn correctability_matches_dense_condition(errors in error_set()) {
            let code = CodeSpec::four_two_two();
            let proj = code_projector(&code);
            let tr = proj.trace();
            let mut dense_ok = true;
            for (a, ea) in errors.iter().enumerate() {
                for eb in &errors[a..] {
                    let m = &proj * ea.dense().adjoint() * eb.dense() * &proj;
                    let c = m.trace() / tr;
                    dense_ok &= crate::linalg::max_abs(&(m - &proj * c)) < 1e-10;
                }
            }
            prop_assert_eq!(check_correctable(&code, &errors).unwrap(), dense_ok);
        }
    }
}
