//! Pauli operators in symplectic form, Pauli sums and Clifford conjugation.
//!
//! An operator is `i^phase` times a tensor product of letters, where the
//! letter on each qubit is stored as an `(x, z)` bit pair: `(1,0)` is X,
//! `(0,1)` is Z and `(1,1)` is Y itself (not `XZ`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];
    pub const NONTRIVIAL: [PauliLetter; 3] = [PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (true, true) => PauliLetter::Y,
            (false, true) => PauliLetter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliLetter::I => (false, false),
            PauliLetter::X => (true, false),
            PauliLetter::Y => (true, true),
            PauliLetter::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_char(ch: char) -> Option<Self> {
        match ch {
            'I' | 'i' => Some(PauliLetter::I),
            'X' | 'x' => Some(PauliLetter::X),
            'Y' | 'y' => Some(PauliLetter::Y),
            'Z' | 'z' => Some(PauliLetter::Z),
            _ => None,
        }
    }

    pub fn matrix(self) -> CMatrix {
        match self {
            PauliLetter::I => linalg::eye(2),
            PauliLetter::X => linalg::sigma_x(),
            PauliLetter::Y => linalg::sigma_y(),
            PauliLetter::Z => linalg::sigma_z(),
        }
    }

    /// Unit Bloch vector of the letter, zero for the identity.
    pub fn axis(self) -> [f64; 3] {
        match self {
            PauliLetter::I => [0.0, 0.0, 0.0],
            PauliLetter::X => [1.0, 0.0, 0.0],
            PauliLetter::Y => [0.0, 1.0, 0.0],
            PauliLetter::Z => [0.0, 0.0, 1.0],
        }
    }
}

/// Power of `i` picked up by the single-qubit product `a * b`.
fn letter_product_phase(a: PauliLetter, b: PauliLetter) -> u8 {
    use PauliLetter::*;
    match (a, b) {
        (X, Y) | (Y, Z) | (Z, X) => 1,
        (Y, X) | (Z, Y) | (X, Z) => 3,
        _ => 0,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: Vec<bool>,
    z: Vec<bool>,
    phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator {
            x: vec![false; n],
            z: vec![false; n],
            phase: 0,
        }
    }

    pub fn from_letters(letters: &[PauliLetter]) -> Self {
        let mut p = Self::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set_letter(q, l);
        }
        p
    }

    /// Operator with the given letters on the listed qubits and identity elsewhere.
    pub fn from_sparse(n: usize, factors: &[(usize, PauliLetter)]) -> Self {
        let mut p = Self::identity(n);
        for &(q, l) in factors {
            p.set_letter(q, l);
        }
        p
    }

    pub fn single(n: usize, qubit: usize, letter: PauliLetter) -> Self {
        Self::from_sparse(n, &[(qubit, letter)])
    }

    pub fn from_bits(x: Vec<bool>, z: Vec<bool>, phase: u8) -> Self {
        assert_eq!(x.len(), z.len());
        PauliOperator { x, z, phase: phase % 4 }
    }

    pub fn n_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &[bool] {
        &self.x
    }

    pub fn z_bits(&self) -> &[bool] {
        &self.z
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase % 4;
        self
    }

    /// Multiply by `i^k`.
    pub fn times_i_pow(mut self, k: u8) -> Self {
        self.phase = (self.phase + k) % 4;
        self
    }

    /// Drop a factor of `i` from an anti-Hermitian operator (`iP -> P`).
    pub fn hermitized(self) -> Self {
        if self.is_hermitian() {
            self
        } else {
            self.times_i_pow(3)
        }
    }

    pub fn phase_factor(&self) -> C64 {
        match self.phase {
            0 => c(1.0, 0.0),
            1 => c(0.0, 1.0),
            2 => c(-1.0, 0.0),
            _ => c(0.0, -1.0),
        }
    }

    pub fn negated(&self) -> Self {
        self.clone().with_phase(self.phase + 2)
    }

    /// Same letters with phase reset to `+1`.
    pub fn unsigned(&self) -> Self {
        self.clone().with_phase(0)
    }

    pub fn letter(&self, q: usize) -> PauliLetter {
        PauliLetter::from_bits(self.x[q], self.z[q])
    }

    pub fn letters(&self) -> Vec<PauliLetter> {
        (0..self.n_qubits()).map(|q| self.letter(q)).collect()
    }

    pub fn set_letter(&mut self, q: usize, l: PauliLetter) {
        let (x, z) = l.bits();
        self.x[q] = x;
        self.z[q] = z;
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).filter(|(x, z)| **x || **z).count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n_qubits())
            .filter(|&q| self.x[q] || self.z[q])
            .collect()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.weight() == 0
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    pub fn commutes_with(&self, other: &PauliOperator) -> bool {
        assert_eq!(self.n_qubits(), other.n_qubits());
        let mut parity = false;
        for q in 0..self.n_qubits() {
            parity ^= (self.x[q] & other.z[q]) ^ (self.z[q] & other.x[q]);
        }
        !parity
    }

    pub fn same_letters(&self, other: &PauliOperator) -> bool {
        self.x == other.x && self.z == other.z
    }

    pub fn mul(&self, other: &PauliOperator) -> Result<PauliOperator> {
        if self.n_qubits() != other.n_qubits() {
            return Err(Error::LengthMismatch {
                left: self.n_qubits(),
                right: other.n_qubits(),
            });
        }
        let mut phase = self.phase as u32 + other.phase as u32;
        let n = self.n_qubits();
        let mut out = PauliOperator::identity(n);
        for q in 0..n {
            phase += letter_product_phase(self.letter(q), other.letter(q)) as u32;
            out.x[q] = self.x[q] ^ other.x[q];
            out.z[q] = self.z[q] ^ other.z[q];
        }
        out.phase = (phase % 4) as u8;
        Ok(out)
    }

    /// Dense `2^n x 2^n` matrix.
    pub fn dense(&self) -> CMatrix {
        let mut m = CMatrix::from_element(1, 1, self.phase_factor());
        for q in 0..self.n_qubits() {
            m = linalg::kron(&m, &self.letter(q).matrix());
        }
        m
    }

    /// Dense matrix on `qubits` only; the operator must be trivial elsewhere.
    pub fn dense_on(&self, qubits: &[usize]) -> Result<CMatrix> {
        for q in self.support() {
            if !qubits.contains(&q) {
                return Err(Error::InvalidTarget {
                    gate: format!("dense_on({self})"),
                    target: qubits.to_vec(),
                    n_qubits: self.n_qubits(),
                });
            }
        }
        Ok(self.restrict(qubits).dense())
    }

    /// Letters on `qubits` (in that order) with the same phase.
    pub fn restrict(&self, qubits: &[usize]) -> PauliOperator {
        let mut p = PauliOperator::identity(qubits.len()).with_phase(self.phase);
        for (i, &q) in qubits.iter().enumerate() {
            p.set_letter(i, self.letter(q));
        }
        p
    }

    /// Place local qubit `i` at `map[i]` of an `n`-qubit register.
    pub fn embed(&self, n: usize, map: &[usize]) -> PauliOperator {
        assert_eq!(map.len(), self.n_qubits());
        let mut p = PauliOperator::identity(n).with_phase(self.phase);
        for (i, &q) in map.iter().enumerate() {
            p.set_letter(q, self.letter(i));
        }
        p
    }

    /// Copy with the factor on `q` replaced by the identity.
    pub fn without(&self, q: usize) -> PauliOperator {
        let mut p = self.clone();
        p.set_letter(q, PauliLetter::I);
        p
    }

    /// Symplectic row `(x_0..x_{n-1}, z_0..z_{n-1})`.
    pub fn symplectic(&self) -> Vec<bool> {
        self.x.iter().chain(self.z.iter()).copied().collect()
    }

    pub fn from_symplectic(bits: &[bool]) -> Self {
        let n = bits.len() / 2;
        PauliOperator::from_bits(bits[..n].to_vec(), bits[n..].to_vec(), 0)
    }

    /// Ordering key: weight, then support, then letters.
    pub fn canonical_key(&self) -> (usize, Vec<usize>, Vec<PauliLetter>) {
        let support = self.support();
        let letters = support.iter().map(|&q| self.letter(q)).collect();
        (self.weight(), support, letters)
    }

    /// Apply to a state vector in place.
    pub fn apply(&self, state: &mut [C64]) {
        let n = self.n_qubits();
        assert_eq!(state.len(), 1 << n);
        let mut xmask = 0usize;
        let mut zmask = 0usize;
        let mut ys = 0u32;
        for q in 0..n {
            let b = linalg::bit(n, q);
            if self.x[q] {
                xmask |= b;
            }
            if self.z[q] {
                zmask |= b;
            }
            if self.x[q] && self.z[q] {
                ys += 1;
            }
        }
        let base_phase = PauliOperator::identity(0)
            .with_phase(((self.phase as u32 + ys) % 4) as u8)
            .phase_factor();
        // Y = i X Z, so amplitudes pick up (-1)^{b.z} before the flip.
        let src = state.to_vec();
        for (b, amp) in src.into_iter().enumerate() {
            let sign = if (b & zmask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            state[b ^ xmask] = amp * base_phase * sign;
        }
    }

    /// `<psi| P |psi>`.
    pub fn expectation(&self, state: &[C64]) -> C64 {
        let mut v = state.to_vec();
        self.apply(&mut v);
        linalg::inner(state, &v)
    }
}

pub fn pauli_mul(a: &PauliOperator, b: &PauliOperator) -> Result<PauliOperator> {
    a.mul(b)
}

pub fn commutes(a: &PauliOperator, b: &PauliOperator) -> bool {
    a.commutes_with(b)
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}")?;
        for q in 0..self.n_qubits() {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::PauliParse {
            literal: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        let (sign, rest) = if let Some(r) = t.strip_prefix('-') {
            (2u8, r)
        } else if let Some(r) = t.strip_prefix('+') {
            (0u8, r)
        } else {
            (0u8, t)
        };
        // A leading lowercase `i` is the imaginary unit, never a letter.
        let (imag, body) = match rest.strip_prefix('i') {
            Some(r) => (1u8, r),
            None => (0u8, rest),
        };
        if body.is_empty() {
            return Err(err("no qubit letters"));
        }
        let letters = body
            .chars()
            .map(|ch| match ch {
                'I' | 'X' | 'Y' | 'Z' => Ok(PauliLetter::from_char(ch).unwrap()),
                _ => Err(err(&format!("unexpected character {ch:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliOperator::from_letters(&letters).with_phase(sign + imag))
    }
}

impl Serialize for PauliOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Clifford gates that map Paulis to Paulis under conjugation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CliffordGate {
    H,
    S,
    Sdg,
    X,
    Y,
    Z,
    Cnot,
}

impl CliffordGate {
    pub fn arity(self) -> usize {
        match self {
            CliffordGate::Cnot => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CliffordGate::H => "H",
            CliffordGate::S => "S",
            CliffordGate::Sdg => "Sdg",
            CliffordGate::X => "X",
            CliffordGate::Y => "Y",
            CliffordGate::Z => "Z",
            CliffordGate::Cnot => "CNOT",
        }
    }

    /// Image of a single letter on the (local) qubit `slot`, as a local
    /// Pauli on `arity` qubits.
    fn image(self, slot: usize, l: PauliLetter) -> PauliOperator {
        use PauliLetter::*;
        let signed = |letters: &[PauliLetter], neg: bool| {
            let p = PauliOperator::from_letters(letters);
            if neg {
                p.negated()
            } else {
                p
            }
        };
        match self {
            CliffordGate::Cnot => match (slot, l) {
                (_, I) => signed(&[I, I], false),
                (0, X) => signed(&[X, X], false),
                (0, Y) => signed(&[Y, X], false),
                (0, Z) => signed(&[Z, I], false),
                (_, X) => signed(&[I, X], false),
                (_, Y) => signed(&[Z, Y], false),
                (_, Z) => signed(&[Z, Z], false),
            },
            g => {
                let (img, neg) = match (g, l) {
                    (_, I) => (I, false),
                    (CliffordGate::H, X) => (Z, false),
                    (CliffordGate::H, Y) => (Y, true),
                    (CliffordGate::H, Z) => (X, false),
                    (CliffordGate::S, X) => (Y, false),
                    (CliffordGate::S, Y) => (X, true),
                    (CliffordGate::S, Z) => (Z, false),
                    (CliffordGate::Sdg, X) => (Y, true),
                    (CliffordGate::Sdg, Y) => (X, false),
                    (CliffordGate::Sdg, Z) => (Z, false),
                    (CliffordGate::X, X) => (X, false),
                    (CliffordGate::X, Y) => (Y, true),
                    (CliffordGate::X, Z) => (Z, true),
                    (CliffordGate::Y, X) => (X, true),
                    (CliffordGate::Y, Y) => (Y, false),
                    (CliffordGate::Y, Z) => (Z, true),
                    (CliffordGate::Z, X) => (X, true),
                    (CliffordGate::Z, Y) => (Y, true),
                    (CliffordGate::Z, Z) => (Z, false),
                    (CliffordGate::Cnot, _) => unreachable!(),
                };
                signed(&[img], neg)
            }
        }
    }

    pub fn matrix(self) -> CMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            CliffordGate::H => CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]),
            CliffordGate::S => CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0)])),
            CliffordGate::Sdg => CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(0.0, -1.0)])),
            CliffordGate::X => linalg::sigma_x(),
            CliffordGate::Y => linalg::sigma_y(),
            CliffordGate::Z => linalg::sigma_z(),
            CliffordGate::Cnot => {
                let mut m = CMatrix::zeros(4, 4);
                m[(0, 0)] = c(1.0, 0.0);
                m[(1, 1)] = c(1.0, 0.0);
                m[(2, 3)] = c(1.0, 0.0);
                m[(3, 2)] = c(1.0, 0.0);
                m
            }
        }
    }
}

/// `U P U^dagger` for a Clifford `U` acting on `targets`.
pub fn clifford_conjugate(p: &PauliOperator, gate: CliffordGate, targets: &[usize]) -> Result<PauliOperator> {
    let n = p.n_qubits();
    let bad = targets.len() != gate.arity()
        || targets.iter().any(|&t| t >= n)
        || (targets.len() == 2 && targets[0] == targets[1]);
    if bad {
        return Err(Error::InvalidTarget {
            gate: gate.name().to_string(),
            target: targets.to_vec(),
            n_qubits: n,
        });
    }
    let mut out = p.clone();
    for &t in targets {
        out.set_letter(t, PauliLetter::I);
    }
    for (slot, &t) in targets.iter().enumerate() {
        let img = gate.image(slot, p.letter(t)).embed(n, targets);
        out = out.mul(&img)?;
    }
    Ok(out)
}

/// Real linear combination of Hermitian Pauli operators.
///
/// Terms are stored with phase `+1`; signs live in the coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: Vec<(f64, PauliOperator)>,
}

#[derive(Serialize, Deserialize)]
struct PauliTermRepr {
    coeff: f64,
    pauli: PauliOperator,
}

impl Serialize for PauliSum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<PauliTermRepr> = self
            .terms
            .iter()
            .map(|(coeff, p)| PauliTermRepr {
                coeff: *coeff,
                pauli: p.clone(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PauliSum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms: Vec<PauliTermRepr> = Vec::deserialize(d)?;
        let n = terms
            .first()
            .map(|t| t.pauli.n_qubits())
            .ok_or_else(|| serde::de::Error::custom("empty Pauli sum"))?;
        let mut sum = PauliSum::zero(n);
        for t in terms {
            sum.add_term(t.coeff, &t.pauli).map_err(serde::de::Error::custom)?;
        }
        Ok(sum)
    }
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        PauliSum { n, terms: Vec::new() }
    }

    pub fn from_pauli(p: &PauliOperator) -> Result<Self> {
        let mut s = PauliSum::zero(p.n_qubits());
        s.add_term(1.0, p)?;
        Ok(s)
    }

    /// `(axis . sigma)` on `qubit` tensored with `tail` (whose factor on
    /// `qubit` must be the identity).
    pub fn bloch(axis: [f64; 3], qubit: usize, tail: &PauliOperator) -> Result<Self> {
        let mut s = PauliSum::zero(tail.n_qubits());
        for (k, l) in PauliLetter::NONTRIVIAL.iter().enumerate() {
            if axis[k].abs() > 1e-15 {
                let mut p = tail.clone();
                p.set_letter(qubit, *l);
                s.add_term(axis[k], &p)?;
            }
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(f64, PauliOperator)] {
        &self.terms
    }

    pub fn add_term(&mut self, coeff: f64, p: &PauliOperator) -> Result<()> {
        if p.n_qubits() != self.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: p.n_qubits(),
            });
        }
        if !p.is_hermitian() {
            return Err(Error::PauliParse {
                literal: p.to_string(),
                reason: "Pauli sums hold Hermitian terms only".into(),
            });
        }
        let coeff = if p.phase() == 2 { -coeff } else { coeff };
        let p = p.unsigned();
        if let Some(t) = self.terms.iter_mut().find(|(_, q)| *q == p) {
            t.0 += coeff;
        } else {
            self.terms.push((coeff, p));
        }
        self.terms.retain(|(k, _)| k.abs() > 1e-15);
        Ok(())
    }

    pub fn scaled(&self, k: f64) -> Self {
        PauliSum {
            n: self.n,
            terms: self.terms.iter().map(|(a, p)| (a * k, p.clone())).collect(),
        }
    }

    pub fn plus(&self, other: &PauliSum) -> Result<Self> {
        let mut s = self.clone();
        for (k, p) in &other.terms {
            s.add_term(*k, p)?;
        }
        Ok(s)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest weight among nonzero terms.
    pub fn weight(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.weight()).max().unwrap_or(0)
    }

    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.terms.iter().flat_map(|(_, p)| p.support()).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// If the sum is a single term, that term with its sign.
    pub fn as_single(&self) -> Option<PauliOperator> {
        match self.terms.as_slice() {
            [(k, p)] if (k.abs() - 1.0).abs() < 1e-12 => Some(if *k < 0.0 { p.negated() } else { p.clone() }),
            _ => None,
        }
    }

    pub fn local_matrix(&self, qubits: &[usize]) -> Result<CMatrix> {
        let d = 1usize << qubits.len();
        let mut m = CMatrix::zeros(d, d);
        for (k, p) in &self.terms {
            m += p.dense_on(qubits)? * c(*k, 0.0);
        }
        Ok(m)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let letters: String = p.to_string().chars().skip(1).collect();
            write!(f, "{k:+.6}*{letters}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn products_and_phases() {
        assert_eq!(p("X").mul(&p("Z")).unwrap(), p("-iY"));
        assert_eq!(p("Z").mul(&p("X")).unwrap(), p("iY"));
        assert_eq!(p("XX").mul(&p("ZZ")).unwrap(), p("-YY"));
        assert!(p("XX").commutes_with(&p("ZZ")));
        assert!(!p("XI").commutes_with(&p("ZZ")));
    }

    #[test]
    fn parse_rejects_junk() {
        assert!("XQ".parse::<PauliOperator>().is_err());
        assert!("-".parse::<PauliOperator>().is_err());
        assert_eq!(p("-iXYZ").phase(), 3);
    }

    #[test]
    fn cnot_images() {
        let img = clifford_conjugate(&p("XI"), CliffordGate::Cnot, &[0, 1]).unwrap();
        assert_eq!(img, p("XX"));
        let img = clifford_conjugate(&p("IZ"), CliffordGate::Cnot, &[0, 1]).unwrap();
        assert_eq!(img, p("ZZ"));
        assert!(clifford_conjugate(&p("IZ"), CliffordGate::Cnot, &[1, 1]).is_err());
        assert!(clifford_conjugate(&p("IZ"), CliffordGate::H, &[2]).is_err());
    }

    #[test]
    fn pauli_sum_signs_fold_into_coefficients() {
        let mut s = PauliSum::zero(2);
        s.add_term(0.5, &p("-XZ")).unwrap();
        s.add_term(0.5, &p("XZ")).unwrap();
        assert!(s.is_zero());
        assert!(s.add_term(1.0, &p("iXZ")).is_err());
    }

    fn pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
        (prop::collection::vec(0..4usize, n), 0..4u8)
            .prop_map(|(ls, ph)| PauliOperator::from_letters(&ls.iter().map(|&i| PauliLetter::ALL[i]).collect::<Vec<_>>()).with_phase(ph))
    }

    fn gate_on(n: usize) -> impl Strategy<Value = (CliffordGate, Vec<usize>)> {
        let single = (
            prop::sample::select(vec![CliffordGate::H, CliffordGate::S, CliffordGate::Sdg, CliffordGate::X, CliffordGate::Y, CliffordGate::Z]),
            0..n,
        )
            .prop_map(|(g, q)| (g, vec![q]));
        let cnot = (0..n, 1..n).prop_map(move |(a, d)| (CliffordGate::Cnot, vec![a, (a + d) % n]));
        prop_oneof![single, cnot]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn product_matches_dense((a, b) in (1..4usize).prop_flat_map(|n| (pauli(n), pauli(n)))) {
            let ab = a.mul(&b).unwrap();
            prop_assert!(linalg::max_abs(&(ab.dense() - a.dense() * b.dense())) < 1e-12);
            let ad = a.dense();
            let bd = b.dense();
            let comm = linalg::max_abs(&(&ad * &bd - &bd * &ad)) < 1e-12;
            prop_assert_eq!(a.commutes_with(&b), comm);
        }

        #[test]
        fn conjugation_matches_dense((a, (g, t)) in (2..4usize).prop_flat_map(|n| (pauli(n), gate_on(n)))) {
            let n = a.n_qubits();
            let u = linalg::embed(&g.matrix(), &t, n);
            let img = clifford_conjugate(&a, g, &t).unwrap();
            let want = &u * a.dense() * u.adjoint();
            prop_assert!(linalg::max_abs(&(img.dense() - want)) < 1e-12);
        }

        #[test]
        fn text_round_trip(a in (1..6usize).prop_flat_map(pauli)) {
            let back: PauliOperator = a.to_string().parse().unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
