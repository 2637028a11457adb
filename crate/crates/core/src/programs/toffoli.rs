//! Toffoli from Hadamard, pi/8, Phase and C-NOT gates, and its compilation
//! onto a cat qubit plus two Bacon-Shor blocks.

use serde::{Deserialize, Serialize};

use super::builder::{CnotForm, CompileOptions, ProgramBuilder};
use super::PathProgram;
use crate::codes::{CodeSpec, TrackedGroup};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::linalg::{self, c, CMatrix};

/// The decomposition as written: the rightmost gate acts first. `R` is the
/// Hadamard, `T` the pi/8 gate, `S` the Phase gate and `Cij` a C-NOT with
/// control `i` and target `j`. Qubits are numbered from 1.
pub const TOFFOLI_WORD: &str =
    "R2 C32 R3 T3† R3 R1 C31 R3 T3 R3 C32 R3 T3† R3 C31 R3 T3 R3 R2 T2† R2 C21 R2 T2† R2 C21 R2 S2 R1 T1";

/// One gate of a word over qubits `0..3` (0-based).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WordGate {
    pub gate: Gate,
    pub qubits: [usize; 2],
}

impl WordGate {
    pub fn targets(&self) -> &[usize] {
        &self.qubits[..self.gate.arity()]
    }
}

/// Parse a word into gates in application order.
pub fn parse_word(word: &str) -> Result<Vec<WordGate>> {
    let bad = |tok: &str| Error::InvalidProgram(format!("bad word token {tok:?}"));
    let mut out = Vec::new();
    for tok in word.split_whitespace().rev() {
        let digit = |ch: Option<char>| -> Result<usize> {
            match ch.and_then(|d| d.to_digit(10)) {
                Some(d) if d >= 1 => Ok(d as usize - 1),
                _ => Err(bad(tok)),
            }
        };
        let mut chars = tok.chars();
        let head = chars.next().ok_or_else(|| bad(tok))?;
        let a = digit(chars.next())?;
        let rest: String = chars.collect();
        let g = match (head, rest.as_str()) {
            ('R', "") => WordGate { gate: Gate::H, qubits: [a, 0] },
            ('T', "") => WordGate { gate: Gate::T, qubits: [a, 0] },
            ('T', "†") => WordGate { gate: Gate::Tdg, qubits: [a, 0] },
            ('S', "") => WordGate { gate: Gate::S, qubits: [a, 0] },
            ('S', "†") => WordGate { gate: Gate::Sdg, qubits: [a, 0] },
            ('C', t) => WordGate {
                gate: Gate::Cnot,
                qubits: [a, digit(t.chars().next())?],
            },
            _ => return Err(bad(tok)),
        };
        out.push(g);
    }
    Ok(out)
}

/// Dense product of a word on `n` qubits.
pub fn word_unitary(gates: &[WordGate], n: usize) -> CMatrix {
    gates.iter().fold(linalg::eye(1 << n), |u, g| linalg::embed(&g.gate.matrix(), g.targets(), n) * u)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ToffoliCheck {
    /// Entrywise deviation of the word from the Toffoli after removing the
    /// best global phase.
    pub max_abs_dev: f64,
    /// `(H (x) H) CNOT_12 (H (x) H)` against `CNOT_21`.
    pub flip_dev: f64,
    /// `Toffoli^2` against the identity.
    pub square_dev: f64,
    pub pass: bool,
}

/// Dense 8x8 check of the decomposition and of the C-NOT flip identity.
pub fn toffoli_identity_check() -> Result<ToffoliCheck> {
    let word = word_unitary(&parse_word(TOFFOLI_WORD)?, 3);
    let toffoli = Gate::Toffoli.matrix();
    let aligned = &word * c(0.0, -linalg::relative_phase(&toffoli, &word)).exp();
    let max_abs_dev = linalg::max_abs(&(aligned - &toffoli));

    let hh = linalg::kron(&Gate::H.matrix(), &Gate::H.matrix());
    let flipped = &hh * linalg::embed(&Gate::Cnot.matrix(), &[0, 1], 2) * &hh;
    let flip_dev = linalg::max_abs(&(flipped - linalg::embed(&Gate::Cnot.matrix(), &[1, 0], 2)));
    let square_dev = linalg::max_abs(&(&toffoli * &toffoli - linalg::eye(8)));
    Ok(ToffoliCheck {
        max_abs_dev,
        flip_dev,
        square_dev,
        pass: max_abs_dev < 1e-12 && flip_dev < 1e-14 && square_dev == 0.0,
    })
}

/// Compile the word onto register qubits `[cat, a, b]`. Gates on the cat
/// qubit use its own group elements; gates on `a` and `b` use the
/// identity-start route anchored on the cat qubit.
pub fn toffoli_word(b: &mut ProgramBuilder, qubits: [usize; 3]) -> Result<()> {
    for g in parse_word(TOFFOLI_WORD)? {
        let q: Vec<usize> = g.targets().iter().map(|&i| qubits[i]).collect();
        match g.gate {
            Gate::Cnot => {
                b.cnot(q[0], q[1], &[CnotForm::XForm, CnotForm::Forward, CnotForm::Backward])?;
            }
            gate if q[0] == qubits[0] => b.single_qubit(q[0], gate)?,
            gate => b.single_qubit_via_identity(q[0], gate, qubits[0])?,
        }
    }
    Ok(())
}

/// Register of a cat state of `cat_size` qubits followed by two 9-qubit
/// Bacon-Shor blocks, with the Toffoli qubits `[0, cat_size, cat_size + 9]`.
pub fn toffoli_context(cat_size: usize) -> (TrackedGroup, [usize; 3]) {
    let bs = crate::codes::build_bacon_shor(3);
    let group = TrackedGroup::blocks_of(&[CodeSpec::cat(cat_size), bs.clone(), bs]);
    (group, [0, cat_size, cat_size + 9])
}

pub fn toffoli_on_cat(cat_size: usize, opts: &CompileOptions) -> Result<PathProgram> {
    let (group, qubits) = toffoli_context(cat_size);
    let mut b = ProgramBuilder::new("toffoli-on-cat", &group, opts);
    toffoli_word(&mut b, qubits)?;
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_parses_in_application_order() {
        let w = parse_word(TOFFOLI_WORD).unwrap();
        assert_eq!(w.len(), 30);
        assert_eq!(w[0], WordGate { gate: Gate::T, qubits: [0, 0] });
        assert_eq!(w[4].gate, Gate::Cnot);
        assert_eq!(w[4].targets(), &[1, 0]);
        assert!(parse_word("Q1").is_err());
    }

    #[test]
    fn identities_hold() {
        let r = toffoli_identity_check().unwrap();
        assert!(r.pass, "{r:?}");
    }
}
