//! Dense complex linear algebra on small registers.
//!
//! Qubit 0 is the most significant bit of a basis index, so a local
//! operator on `qubits = [a, b]` has `a` as its leading tensor factor.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Register size above which dense matrices are refused.
pub const DEFAULT_DENSE_QUBITS: usize = 12;
/// Register size above which state vectors are refused.
pub const DEFAULT_STATE_QUBITS: usize = 20;

/// Caps on dense simulation, overridable through `HOLONOME_DENSE_LIMIT`
/// as either `N` (matrix cap) or `N,M` (matrix cap, state-vector cap).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub dense_qubits: usize,
    pub state_qubits: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            dense_qubits: DEFAULT_DENSE_QUBITS,
            state_qubits: DEFAULT_STATE_QUBITS,
        }
    }
}

impl Limits {
    pub fn from_env() -> Self {
        match std::env::var("HOLONOME_DENSE_LIMIT") {
            Ok(v) => Self::parse(&v).unwrap_or_default(),
            Err(_) => Self::default(),
        }
    }

    pub fn parse(v: &str) -> Option<Self> {
        let mut parts = v.split(',').map(|p| p.trim().parse::<usize>());
        let dense = parts.next()?.ok()?;
        let state = match parts.next() {
            Some(p) => p.ok()?,
            None => DEFAULT_STATE_QUBITS.max(dense),
        };
        Some(Limits {
            dense_qubits: dense,
            state_qubits: state,
        })
    }

    pub fn check_dense(&self, what: &str, qubits: usize) -> Result<()> {
        if qubits > self.dense_qubits {
            return Err(Error::DenseLimit {
                what: what.to_string(),
                qubits,
                limit: self.dense_qubits,
            });
        }
        Ok(())
    }

    pub fn check_state(&self, what: &str, qubits: usize) -> Result<()> {
        if qubits > self.state_qubits {
            return Err(Error::DenseLimit {
                what: what.to_string(),
                qubits,
                limit: self.state_qubits,
            });
        }
        Ok(())
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn eye(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn sigma_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn sigma_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn sigma_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// `n . sigma` for a real 3-vector.
pub fn bloch_operator(n: [f64; 3]) -> CMatrix {
    sigma_x() * c(n[0], 0.0) + sigma_y() * c(n[1], 0.0) + sigma_z() * c(n[2], 0.0)
}

/// Projector onto `|b><b|` of one qubit.
pub fn basis_projector(b: usize) -> CMatrix {
    let mut p = CMatrix::zeros(2, 2);
    p[(b, b)] = ONE;
    p
}

/// `|Tr(U^dagger V)| / d`: one for equal unitaries up to a global phase.
pub fn fidelity(u: &CMatrix, v: &CMatrix) -> f64 {
    let d = u.nrows() as f64;
    (u.adjoint() * v).trace().norm() / d
}

/// Global phase `arg Tr(U^dagger V)`.
pub fn relative_phase(u: &CMatrix, v: &CMatrix) -> f64 {
    (u.adjoint() * v).trace().arg()
}

/// Distance between unitaries after removing the best global phase.
pub fn phase_free_distance(u: &CMatrix, v: &CMatrix) -> f64 {
    let ph = C64::from_polar(1.0, -relative_phase(u, v));
    max_abs(&(v * ph - u))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn operator_norm(m: &CMatrix) -> f64 {
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0, |a: f64, &s| a.max(s))
}

/// Deviation from unitarity, `max |U^dagger U - I|`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    max_abs(&(u.adjoint() * u - eye(u.nrows())))
}

/// Unitary factor of the polar decomposition, `W V^dagger` from the SVD.
pub fn polar(m: &CMatrix) -> CMatrix {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("svd u");
    let vt = svd.v_t.expect("svd v_t");
    u * vt
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let herm = (h + h.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let d = h.nrows();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = CMatrix::zeros(d, d);
    for (j, &k) in order.iter().enumerate() {
        vecs.set_column(j, &eig.eigenvectors.column(k));
    }
    (vals, vecs)
}

/// `exp(-i t H)` for Hermitian `H`.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    if h.nrows() == 2 {
        return expm_2x2(h, t);
    }
    let (vals, vecs) = eigh(h);
    let phases = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&l| C64::from_polar(1.0, -t * l)),
    ));
    &vecs * phases * vecs.adjoint()
}

fn expm_2x2(h: &CMatrix, t: f64) -> CMatrix {
    let a0 = 0.5 * (h[(0, 0)].re + h[(1, 1)].re);
    let az = 0.5 * (h[(0, 0)].re - h[(1, 1)].re);
    let ax = 0.5 * (h[(0, 1)].re + h[(1, 0)].re);
    let ay = 0.5 * (h[(1, 0)].im - h[(0, 1)].im);
    let r = (ax * ax + ay * ay + az * az).sqrt();
    let (s, co) = (r * t).sin_cos();
    let k = if r > 0.0 { s / r } else { t };
    let g = C64::from_polar(1.0, -a0 * t);
    let m00 = c(co, -k * az);
    let m11 = c(co, k * az);
    let m01 = c(-k * ay, -k * ax);
    let m10 = c(k * ay, -k * ax);
    CMatrix::from_row_slice(2, 2, &[m00 * g, m01 * g, m10 * g, m11 * g])
}

/// Bit mask of `qubit` inside an `n`-qubit basis index.
pub fn bit(n: usize, qubit: usize) -> usize {
    1 << (n - 1 - qubit)
}

/// Embed a local operator on `qubits` into the full `n`-qubit register.
pub fn embed(local: &CMatrix, qubits: &[usize], n: usize) -> CMatrix {
    let dim = 1usize << n;
    let mut full = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut e = vec![ZERO; dim];
        e[col] = ONE;
        apply_local(&mut e, n, qubits, local);
        for (row, v) in e.into_iter().enumerate() {
            full[(row, col)] = v;
        }
    }
    full
}

/// Apply a local operator on `qubits` to an `n`-qubit state vector in place.
pub fn apply_local(state: &mut [C64], n: usize, qubits: &[usize], local: &CMatrix) {
    let k = qubits.len();
    let ld = 1usize << k;
    debug_assert_eq!(local.nrows(), ld);
    debug_assert_eq!(state.len(), 1 << n);
    let masks: Vec<usize> = qubits.iter().map(|&q| bit(n, q)).collect();
    let all: usize = masks.iter().fold(0, |a, m| a | m);
    let offsets: Vec<usize> = (0..ld)
        .map(|j| {
            (0..k)
                .filter(|&i| j & (1 << (k - 1 - i)) != 0)
                .fold(0, |a, i| a | masks[i])
        })
        .collect();
    let mut buf = vec![ZERO; ld];
    for base in 0..state.len() {
        if base & all != 0 {
            continue;
        }
        for j in 0..ld {
            buf[j] = state[base | offsets[j]];
        }
        for r in 0..ld {
            let mut acc = ZERO;
            for j in 0..ld {
                acc += local[(r, j)] * buf[j];
            }
            state[base | offsets[r]] = acc;
        }
    }
}

/// Re-express a local operator on `from` as one on the superset `to`.
pub fn widen(local: &CMatrix, from: &[usize], to: &[usize]) -> CMatrix {
    let pos: Vec<usize> = from
        .iter()
        .map(|q| to.iter().position(|t| t == q).expect("superset"))
        .collect();
    embed(local, &pos, to.len())
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalize(a: &mut [C64]) -> f64 {
    let nrm = norm(a);
    if nrm > 0.0 {
        for z in a.iter_mut() {
            *z /= nrm;
        }
    }
    nrm
}

/// Normalized state with independent complex Gaussian amplitudes.
pub fn random_state<R: rand::Rng>(rng: &mut R, dim: usize) -> Vec<C64> {
    let mut v: Vec<C64> = (0..dim)
        .map(|_| {
            let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
            let u2: f64 = rng.random();
            let r = (-2.0 * u1.ln()).sqrt();
            C64::from_polar(r, 2.0 * std::f64::consts::PI * u2)
        })
        .collect();
    normalize(&mut v);
    v
}
