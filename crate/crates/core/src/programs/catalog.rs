//! Single-qubit axis paths.
//!
//! A path is a list of Bloch axes `n_0, n_1, ...`; leg `k` interpolates the
//! single-qubit factor of the Hamiltonian from `n_k . sigma` to
//! `n_{k+1} . sigma`. Paths here start at `+Z` (the Z frame).

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8, PI};

use crate::gates::Gate;
use crate::linalg::{self, c, CMatrix};

pub type Axis = [f64; 3];

pub const PZ: Axis = [0.0, 0.0, 1.0];
pub const MZ: Axis = [0.0, 0.0, -1.0];
pub const PX: Axis = [1.0, 0.0, 0.0];
pub const PY: Axis = [0.0, 1.0, 0.0];
pub const MY: Axis = [0.0, -1.0, 0.0];

pub fn equator(alpha: f64) -> Axis {
    [alpha.cos(), alpha.sin(), 0.0]
}

/// Catalog loops: X, Z, Y, H, S and the pi/8 gate.
pub fn catalog_path(gate: Gate) -> Option<Vec<Axis>> {
    let z_loop = vec![PZ, PX, MZ, MY, PZ];
    match gate {
        Gate::I => Some(vec![PZ]),
        Gate::X => Some(vec![PZ, PY, MZ]),
        Gate::Z => Some(z_loop),
        Gate::Y => {
            let mut p = z_loop;
            p.extend([PY, MZ]);
            Some(p)
        }
        Gate::H => {
            let mut p = z_loop;
            p.push(PX);
            Some(p)
        }
        Gate::S => Some(vec![PZ, equator(FRAC_PI_4), MZ, MY, PZ]),
        Gate::T => {
            let mut p = catalog_path(Gate::Y)?;
            p.extend([equator(FRAC_PI_8), PZ]);
            Some(p)
        }
        _ => None,
    }
}

/// Bloch vector of a traceless Hermitian 2x2 matrix.
pub fn bloch_of(m: &CMatrix) -> Axis {
    let comp = |s: CMatrix| (m * s).trace().re / 2.0;
    [comp(linalg::sigma_x()), comp(linalg::sigma_y()), comp(linalg::sigma_z())]
}

/// Axis `R n R^dagger` for a single-qubit unitary `R`.
pub fn rotate_axis(r: &CMatrix, n: Axis) -> Axis {
    bloch_of(&(r * linalg::bloch_operator(n) * r.adjoint()))
}

fn close(a: Axis, b: Axis) -> bool {
    (0..3).all(|k| (a[k] - b[k]).abs() < 1e-10)
}

/// Axis path from `+Z` whose transport equals `u` up to global phase:
/// a phase lune `Z -> X -> -Z -> n_alpha -> Z` for the Z-rotation part
/// followed by one great-circle leg to `u Z u^dagger`.
pub fn synthesize_path(u: &CMatrix) -> Vec<Axis> {
    let m = rotate_axis(u, PZ);
    let mut path = vec![PZ];
    let (geodesic, tail): (CMatrix, Vec<Axis>) = if close(m, PZ) {
        (linalg::eye(2), vec![])
    } else if close(m, MZ) {
        // Half-turn about y through +X: exp(-i pi/2 Y).
        (-(linalg::sigma_y() * c(0.0, 1.0)), vec![PX, MZ])
    } else {
        let k = [-m[1], m[0], 0.0];
        let kn = k[0].hypot(k[1]);
        let angle = m[2].clamp(-1.0, 1.0).acos();
        let axis = [k[0] / kn, k[1] / kn, 0.0];
        (linalg::expm_hermitian(&linalg::bloch_operator(axis), angle / 2.0), vec![m])
    };
    let d = geodesic.adjoint() * u;
    let alpha = (d[(1, 1)] / d[(0, 0)]).arg() / 2.0;
    if alpha.abs() > 1e-12 && (alpha.abs() - PI).abs() > 1e-12 {
        path.extend([PX, MZ, equator(alpha), PZ]);
    }
    path.extend(tail);
    path
}

/// Frame rotation taking `Z` to the given letter's axis.
pub fn frame_for(axis: Axis) -> CMatrix {
    let s = FRAC_1_SQRT_2;
    let h = CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]);
    if close(axis, PZ) {
        linalg::eye(2)
    } else if close(axis, PX) {
        h
    } else if close(axis, PY) {
        Gate::S.matrix() * h
    } else {
        panic!("no frame for axis {axis:?}")
    }
}

/// Path realizing `u` when the element's factor on the qubit is `R Z R^dagger`.
pub fn path_in_frame(u: &CMatrix, r: &CMatrix, catalog: Option<Gate>) -> Vec<Axis> {
    let is_z_frame = linalg::max_abs(&(r - linalg::eye(2))) < 1e-14;
    let z_path = match catalog.filter(|_| is_z_frame).and_then(catalog_path) {
        Some(p) => p,
        None => synthesize_path(&(r.adjoint() * u * r)),
    };
    z_path.into_iter().map(|n| rotate_axis(r, n)).collect()
}

/// Geometric unitary of a path of great-circle legs, each the rotation
/// `(I + B A)/sqrt2`-type map taking one axis to the next.
pub fn path_unitary(path: &[Axis]) -> CMatrix {
    let mut u = linalg::eye(2);
    for w in path.windows(2) {
        let (a, b) = (w[0], w[1]);
        let k = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let angle = kn.atan2(dot);
        let axis = [k[0] / kn, k[1] / kn, k[2] / kn];
        u = linalg::expm_hermitian(&linalg::bloch_operator(axis), angle / 2.0) * u;
    }
    u
}

/// Angle of the equatorial endpoint for legs between a pole and the equator.
pub fn leg_theta(a: Axis, b: Axis) -> Option<f64> {
    let pole = |n: Axis| n[2].abs() > 1.0 - 1e-12;
    let eq = |n: Axis| n[2].abs() < 1e-12;
    if pole(a) && eq(b) {
        Some(b[1].atan2(b[0]))
    } else if eq(a) && pole(b) {
        Some(a[1].atan2(a[0]))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_paths_realize_their_gates() {
        for g in [Gate::X, Gate::Y, Gate::Z, Gate::H, Gate::S, Gate::T] {
            let u = path_unitary(&catalog_path(g).unwrap());
            assert!(linalg::fidelity(&u, &g.matrix()) > 1.0 - 1e-12, "{g:?}");
        }
        let x = path_unitary(&catalog_path(Gate::X).unwrap());
        assert!(linalg::max_abs(&(x - linalg::sigma_x() * c(0.0, 1.0))) < 1e-12, "X loop gives iX");
    }

    #[test]
    fn synthesis_covers_non_catalog_gates() {
        for g in [Gate::Sdg, Gate::Tdg, Gate::Phase(0.3), Gate::H, Gate::X, Gate::I] {
            let u = path_unitary(&synthesize_path(&g.matrix()));
            assert!(linalg::fidelity(&u, &g.matrix()) > 1.0 - 1e-12, "{g:?}");
        }
        let r = frame_for(PY);
        let u = path_unitary(&path_in_frame(&Gate::T.matrix(), &r, None));
        assert!(linalg::fidelity(&u, &Gate::T.matrix()) > 1.0 - 1e-12);
    }
}
