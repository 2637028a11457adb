//! Holonomies of degenerate eigenspaces along sampled frame paths.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, C64};
use crate::schedules::Interpolation;

/// Orthonormal frames (`d x k` isometries) sampled along a path.
#[derive(Clone, Debug)]
pub struct EigenFramePath {
    pub frames: Vec<CMatrix>,
    /// The last frame spans the same subspace as the first.
    pub closed: bool,
}

impl EigenFramePath {
    pub fn new(frames: Vec<CMatrix>, closed: bool) -> Result<Self> {
        let path = EigenFramePath { frames, closed };
        path.validate()?;
        Ok(path)
    }

    pub fn validate(&self) -> Result<()> {
        let Some(first) = self.frames.first() else {
            return Err(Error::InvalidPath("no frames".into()));
        };
        let (d, k) = first.shape();
        for (i, w) in self.frames.iter().enumerate() {
            if w.shape() != (d, k) {
                return Err(Error::InvalidPath(format!("frame {i} has shape {:?}", w.shape())));
            }
            if linalg::max_abs(&(w.adjoint() * w - linalg::eye(k))) > 1e-8 {
                return Err(Error::InvalidPath(format!("frame {i} is not orthonormal")));
            }
        }
        for (i, pair) in self.frames.windows(2).enumerate() {
            let overlap = pair[1].adjoint() * &pair[0];
            let smallest = overlap
                .svd(false, false)
                .singular_values
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min);
            if smallest < 0.5 {
                return Err(Error::InvalidPath(format!(
                    "frames {i} and {} are nearly orthogonal; sample the path more finely",
                    i + 1
                )));
            }
        }
        if self.closed {
            let last = self.frames.last().unwrap();
            let proj = |w: &CMatrix| w * w.adjoint();
            if linalg::max_abs(&(proj(first) - proj(last))) > 1e-8 {
                return Err(Error::InvalidPath("closed path does not return to its starting subspace".into()));
            }
        }
        Ok(())
    }
}

/// Parallel transport along the path, in the basis of the first frame.
///
/// For an open path the result maps first-frame coefficients to
/// last-frame coefficients. For a closed path it is the holonomy, with the
/// last frame re-expressed in the first.
pub fn transport(path: &EigenFramePath) -> Result<CMatrix> {
    path.validate()?;
    let k = path.frames[0].ncols();
    let mut u = linalg::eye(k);
    for pair in path.frames.windows(2) {
        u = linalg::polar(&(pair[1].adjoint() * &pair[0])) * u;
    }
    if path.closed {
        let first = &path.frames[0];
        let last = path.frames.last().unwrap();
        u = first.adjoint() * last * u;
    }
    Ok(u)
}

/// Frame of `final_subspace` closest to `initial`: `V polar(V^dagger W)`.
pub fn most_parallel_frame(initial: &CMatrix, final_subspace: &CMatrix) -> Result<CMatrix> {
    if initial.shape() != final_subspace.shape() {
        return Err(Error::InvalidPath("frames of different shape".into()));
    }
    let overlap = final_subspace.adjoint() * initial;
    Ok(final_subspace * linalg::polar(&overlap))
}

/// Holonomy-log contribution `-int <chi| d chi>` of each column, from
/// overlaps of consecutive samples, reduced to `(-pi, pi]`.
pub fn berry_phase_segment(frames: &[CMatrix]) -> Vec<C64> {
    let k = frames[0].ncols();
    (0..k)
        .map(|j| {
            let total: f64 = frames
                .windows(2)
                .map(|p| p[1].column(j).dotc(&p[0].column(j)).arg())
                .sum();
            c(0.0, wrap_phase(total))
        })
        .collect()
}

/// Reduce an angle to `(-pi, pi]`.
pub fn wrap_phase(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI + 1e-12 {
        y -= 2.0 * PI;
    }
    if (y + PI).abs() < 1e-9 {
        y = PI;
    }
    y
}

/// Angle difference modulo `2 pi`, in `[0, pi]`.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    wrap_phase(a - b).abs()
}

/// Scale a vector so its first non-negligible component is real positive.
pub fn canonical_gauge(v: &CMatrix) -> CMatrix {
    let pivot = v.iter().find(|z| z.norm() > 1e-9).copied().unwrap_or(c(1.0, 0.0));
    v * C64::from_polar(1.0, -pivot.arg())
}

/// Bloch axes of the four legs of the Z-gate loop `Z -> X -> -Z -> -Y -> Z`.
pub const Z_LOOP: [([f64; 3], [f64; 3]); 4] = [
    ([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]),
    ([1.0, 0.0, 0.0], [0.0, 0.0, -1.0]),
    ([0.0, 0.0, -1.0], [0.0, -1.0, 0.0]),
    ([0.0, -1.0, 0.0], [0.0, 0.0, 1.0]),
];

/// Closed-form eigenvectors `(chi0, chi1)` (energies `+E`, `-E`) of leg
/// `segment` (1 to 4) of the linear-interpolation Z loop at `s` in `[0,1]`.
/// Their gauges agree at the junctions, with the first nonzero component
/// of each junction state real positive.
pub fn linear_loop_frames(segment: usize, s: f64) -> Result<(CMatrix, CMatrix)> {
    let col = |a: C64, b: C64| {
        let v = CMatrix::from_column_slice(2, 1, &[a, b]);
        let n = linalg::frobenius(&v);
        v / c(n, 0.0)
    };
    let r = |x: f64| c(x, 0.0);
    let ramp = |phi: f64| C64::from_polar(1.0, phi);
    match segment {
        1 => {
            let (a, b) = (1.0 - s, s);
            let e = a.hypot(b);
            Ok((col(r(e + a), r(b)), col(r(-b), r(e + a)) * ramp(PI * s)))
        }
        2 => {
            let (a, b) = (-s, 1.0 - s);
            let e = a.hypot(b);
            Ok((col(r(b), r(e - a)), col(r(e - a), r(-b))))
        }
        3 => {
            let e = (1.0 - s).hypot(s);
            Ok((
                col(c(0.0, s), r(e + 1.0 - s)) * ramp(-PI * s / 2.0),
                col(r(e + 1.0 - s), c(0.0, s)),
            ))
        }
        4 => {
            let e = s.hypot(1.0 - s);
            Ok((
                col(r(e + s), c(0.0, -(1.0 - s))),
                col(c(0.0, 1.0 - s), r(-(e + s))) * (c(0.0, -1.0) * ramp(-PI * s / 2.0)),
            ))
        }
        _ => Err(Error::InvalidPath(format!("leg {segment} of a four-leg loop"))),
    }
}

fn leg_hamiltonian(interp: &Interpolation, leg: usize, s: f64) -> CMatrix {
    let (a, b) = Z_LOOP[leg];
    let (f, g) = interp.fg(s);
    linalg::bloch_operator([f * a[0] + g * b[0], f * a[1] + g * b[1], f * a[2] + g * b[2]])
}

/// Numerically computed eigenvector path of one level, phase-continuous,
/// with a linear phase ramp so both ends sit in the canonical gauge.
pub fn numeric_level_path(h: &dyn Fn(f64) -> CMatrix, level: usize, samples: usize) -> Vec<CMatrix> {
    let mut out: Vec<CMatrix> = Vec::with_capacity(samples + 1);
    for k in 0..=samples {
        let s = k as f64 / samples as f64;
        let (_, vecs) = linalg::eigh(&h(s));
        let mut v = vecs.columns(level, 1).into_owned();
        if let Some(prev) = out.last() {
            let ov = v.dotc(prev);
            v *= C64::from_polar(1.0, ov.arg());
        } else {
            v = canonical_gauge(&v);
        }
        out.push(v);
    }
    let end = out.last().unwrap().clone();
    let mismatch = canonical_gauge(&end).dotc(&end).arg();
    for (k, v) in out.iter_mut().enumerate() {
        let s = k as f64 / samples as f64;
        *v *= C64::from_polar(1.0, -mismatch * s);
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZLoopReport {
    /// Holonomy of the ground space of `-H (x) Z` in the basis
    /// `(chi0 (x) |0>, chi1 (x) |1>)`, as `[re, im]` pairs in column-major order.
    pub holonomy: Vec<[f64; 2]>,
    /// Phases of the diagonal entries.
    pub phases: [f64; 2],
    /// Holonomy-log contributions (imaginary parts) per leg, per level.
    pub leg_phases: Vec<[f64; 2]>,
    /// Largest off-diagonal modulus.
    pub off_diagonal: f64,
    pub samples_per_leg: usize,
}

/// Holonomy of the Z-gate loop with `G~ = Z`, from numerically computed
/// eigenframes (or closed-form frames when `closed_form` is set; linear
/// interpolation only).
pub fn z_gate_holonomy(interp: &Interpolation, samples_per_leg: usize, closed_form: bool) -> Result<ZLoopReport> {
    if closed_form && *interp != Interpolation::Linear {
        return Err(Error::Unsupported("closed-form frames exist for linear interpolation only".into()));
    }
    let ket = |b: usize| {
        let mut v = CMatrix::zeros(2, 1);
        v[(b, 0)] = c(1.0, 0.0);
        v
    };
    let mut frames: Vec<CMatrix> = Vec::new();
    let mut leg_phases = Vec::new();
    for leg in 0..4 {
        let (chi0, chi1): (Vec<CMatrix>, Vec<CMatrix>) = if closed_form {
            (0..=samples_per_leg)
                .map(|k| linear_loop_frames(leg + 1, k as f64 / samples_per_leg as f64))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .unzip()
        } else {
            let h = |s: f64| leg_hamiltonian(interp, leg, s);
            (numeric_level_path(&h, 1, samples_per_leg), numeric_level_path(&h, 0, samples_per_leg))
        };
        let berry0 = berry_phase_segment(&chi0)[0].im;
        let berry1 = berry_phase_segment(&chi1)[0].im;
        leg_phases.push([berry0, berry1]);
        for k in 0..=samples_per_leg {
            if leg > 0 && k == 0 {
                continue;
            }
            let mut w = CMatrix::zeros(4, 2);
            w.set_column(0, &linalg::kron(&chi0[k], &ket(0)).column(0));
            w.set_column(1, &linalg::kron(&chi1[k], &ket(1)).column(0));
            frames.push(w);
        }
    }
    let path = EigenFramePath::new(frames, true)?;
    let hol = transport(&path)?;
    Ok(ZLoopReport {
        holonomy: hol.iter().map(|z| [z.re, z.im]).collect(),
        phases: [hol[(0, 0)].arg(), hol[(1, 1)].arg()],
        leg_phases,
        off_diagonal: hol[(0, 1)].norm().max(hol[(1, 0)].norm()),
        samples_per_leg,
    })
}

impl ZLoopReport {
    pub fn matrix(&self) -> CMatrix {
        // Stored column-major, as nalgebra iterates.
        CMatrix::from_iterator(2, 2, self.holonomy.iter().map(|z| c(z[0], z[1])))
    }
}

/// Apply smooth per-sample basis changes `exp(i a sin(pi s) K)` that vanish
/// at both ends of the path.
pub fn randomize_gauge<R: Rng>(path: &EigenFramePath, rng: &mut R, amplitude: f64) -> EigenFramePath {
    let k = path.frames[0].ncols();
    let mut herm = CMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..=i {
            let z = if i == j {
                c(rng.random_range(-1.0..1.0), 0.0)
            } else {
                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            };
            herm[(i, j)] = z;
            herm[(j, i)] = z.conj();
        }
    }
    let m = path.frames.len() - 1;
    let frames = path
        .frames
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let s = i as f64 / m as f64;
            w * linalg::expm_hermitian(&herm, -amplitude * (PI * s).sin())
        })
        .collect();
    EigenFramePath {
        frames,
        closed: path.closed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_snaps_minus_pi() {
        assert!((wrap_phase(-PI) - PI).abs() < 1e-12);
        assert!((wrap_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_frames_are_eigenvectors() {
        for leg in 1..=4 {
            for k in 0..=10 {
                let s = k as f64 / 10.0;
                let h = leg_hamiltonian(&Interpolation::Linear, leg - 1, s);
                let e = linalg::eigh(&h).0[1];
                let (x0, x1) = linear_loop_frames(leg, s).unwrap();
                assert!(linalg::max_abs(&(&h * &x0 - &x0 * c(e, 0.0))) < 1e-12, "leg {leg} s {s}");
                assert!(linalg::max_abs(&(&h * &x1 + &x1 * c(e, 0.0))) < 1e-12, "leg {leg} s {s}");
            }
        }
    }
}
