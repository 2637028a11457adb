use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

use holonome::evolution::{
    assemble_full, evolve_segment, evolve_two_level, exact_adiabatic_transport, transport_interval, EvolutionOptions,
    SegmentHamiltonian, TransportOptions, TwoLevelFamily,
};
use holonome::linalg::{self, c, CMatrix, Limits};
use holonome::pauli::{PauliOperator, PauliSum};
use holonome::schedules::Schedule;
use proptest::prelude::*;

fn p(s: &str) -> PauliOperator {
    s.parse().unwrap()
}

/// `(1/sqrt2) [[1, -+e^{-i theta}], [+-e^{i theta}, 1]]`.
fn v_gate(theta: f64, sign: f64) -> CMatrix {
    let s = FRAC_1_SQRT_2;
    let e = |a: f64| c(a.cos(), a.sin());
    CMatrix::from_row_slice(2, 2, &[c(s, 0.0), -e(-theta) * sign * s, e(theta) * sign * s, c(s, 0.0)])
}

/// `W = [[0, i e^{-i theta}], [-i e^{i theta}, 0]]`.
fn w_gate(theta: f64) -> CMatrix {
    let e = |a: f64| c(a.cos(), a.sin());
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 1.0) * e(-theta), c(0.0, -1.0) * e(theta), c(0.0, 0.0)])
}

fn axis(theta: f64, sign: f64) -> [f64; 3] {
    [sign * theta.cos(), sign * theta.sin(), 0.0]
}

/// `-(f a.sigma + g b.sigma) (x) G~` on qubit 0 followed by the qubits of `G~`.
fn segment(a: [f64; 3], b: [f64; 3], g_tilde: &str, schedule: &Schedule) -> SegmentHamiltonian {
    let tail = p(&format!("I{g_tilde}"));
    let n = tail.n_qubits();
    let targets: Vec<usize> = (0..n).collect();
    SegmentHamiltonian::single(
        "seg",
        &targets,
        PauliSum::bloch(a, 0, &tail).unwrap(),
        PauliSum::bloch(b, 0, &tail).unwrap(),
        schedule,
    )
}

fn with_identity(u: &CMatrix, g_tilde: &str) -> CMatrix {
    linalg::kron(u, &linalg::eye(1 << g_tilde.len()))
}

#[test]
fn half_turn_segments_give_v_theta() {
    for theta in [0.0, FRAC_PI_8, FRAC_PI_4, FRAC_PI_2] {
        for sign in [1.0, -1.0] {
            for g in ["Z", "ZZ"] {
                let seg = segment([0.0, 0.0, 1.0], axis(theta, sign), g, &Schedule::linear(1.0));
                let u = exact_adiabatic_transport(&seg).unwrap();
                let f = linalg::fidelity(&with_identity(&v_gate(theta, sign), g), &u.matrix);
                assert!(f > 1.0 - 1e-8, "theta {theta} sign {sign} G~ {g}: {f}");
            }
        }
    }
}

#[test]
fn v_theta_is_the_rotation_onto_h_theta() {
    for theta in [0.0, FRAC_PI_8, FRAC_PI_4, FRAC_PI_2, 1.0] {
        for sign in [1.0, -1.0] {
            let v = v_gate(theta, sign);
            assert!(linalg::unitarity_defect(&v) < 1e-14);
            let h = &v * linalg::sigma_z() * v.adjoint();
            let want = linalg::bloch_operator(axis(theta, sign));
            assert!(linalg::max_abs(&(h - want)) < 1e-14);
            assert!(linalg::max_abs(&(v.adjoint() - v_gate(theta, -sign))) < 1e-14);
        }
    }
}

#[test]
fn w_theta_commutes_with_v_and_flips_the_levels() {
    let schedule = Schedule::linear(12.0);
    for theta in [0.0, FRAC_PI_8, FRAC_PI_4, FRAC_PI_2] {
        let w = w_gate(theta);
        let v = v_gate(theta, 1.0);
        assert!(linalg::max_abs(&(&w * &v - &v * &w)) < 1e-14);
        assert!(linalg::max_abs(&(&w * linalg::sigma_z() + linalg::sigma_z() * &w)) < 1e-14);
        let fam = TwoLevelFamily {
            start: [0.0, 0.0, 1.0],
            end: axis(theta, 1.0),
        };
        let (u0, u1) = evolve_two_level(&fam, &schedule, 1e-11).unwrap();
        assert!(linalg::max_abs(&(&u0 - &w * &u1 * &w)) < 1e-8, "theta {theta}");
    }
}

#[test]
fn assembled_blocks_match_the_full_propagator() {
    let schedule = Schedule::trig(3.0);
    for g in ["Z", "ZZ", "XY"] {
        let fam = TwoLevelFamily {
            start: [0.0, 0.0, 1.0],
            end: axis(0.7, 1.0),
        };
        let (u0, u1) = evolve_two_level(&fam, &schedule, 1e-11).unwrap();
        let assembled = assemble_full(&u0, &u1, &p(g), &Limits::default()).unwrap();
        let seg = segment(fam.start, fam.end, g, &schedule);
        let opts = EvolutionOptions {
            max_diabatic: 1.0,
            ..EvolutionOptions::default()
        };
        let full = evolve_segment(&seg, &opts).unwrap().unitary.matrix;
        assert!(linalg::max_abs(&(assembled - full)) < 1e-8, "G~ = {g}");
    }
}

#[test]
fn slow_evolution_approaches_the_transport() {
    let infidelity = |t: f64| {
        let seg = segment([0.0, 0.0, 1.0], axis(FRAC_PI_4, 1.0), "Z", &Schedule::bump(t));
        let exact = exact_adiabatic_transport(&seg).unwrap().matrix;
        let r = evolve_segment(&seg, &EvolutionOptions::default()).unwrap();
        assert!(r.diabatic_error < 1e-6, "T = {t}: {}", r.diabatic_error);
        1.0 - linalg::fidelity(&exact, &r.geometric.matrix)
    };
    let (a, b) = (infidelity(100.0), infidelity(400.0));
    assert!(a < 1e-4 && b < a / 4.0, "{a} {b}");
}

#[test]
fn sign_of_the_hamiltonian_does_not_change_the_transport() {
    let plus = segment([0.0, 0.0, 1.0], axis(0.3, 1.0), "ZZ", &Schedule::linear(1.0));
    let minus = segment([0.0, 0.0, -1.0], axis(0.3, -1.0), "ZZ", &Schedule::linear(1.0));
    let a = exact_adiabatic_transport(&plus).unwrap().matrix;
    let b = exact_adiabatic_transport(&minus).unwrap().matrix;
    assert!(linalg::max_abs(&(a - b)) < 1e-10);
}

#[test]
fn partial_transports_compose() {
    let seg = segment([0.0, 0.0, 1.0], [0.6, 0.0, 0.8], "Z", &Schedule::linear(1.0));
    let o = TransportOptions::default();
    let whole = transport_interval(&seg, 0.0, 1.0, &o).unwrap().unitary.matrix;
    let first = transport_interval(&seg, 0.0, 0.4, &o).unwrap().unitary.matrix;
    let second = transport_interval(&seg, 0.4, 1.0, &o).unwrap().unitary.matrix;
    assert!(linalg::max_abs(&(second * first - whole)) < 1e-8);
}

fn unit_axis() -> impl Strategy<Value = [f64; 3]> {
    (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU)
        .prop_map(|(t, ph)| [t.sin() * ph.cos(), t.sin() * ph.sin(), t.cos()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Transport of `-H(t) (x) G~` is `U (x) I~` for any traceless `H`.
    #[test]
    fn transport_factorizes(a in unit_axis(), b in unit_axis(), g in prop::sample::select(vec!["Z", "ZZ", "XZ"])) {
        let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        prop_assume!(dot > -0.9);
        let seg = segment(a, b, g, &Schedule::linear(1.0));
        let u = exact_adiabatic_transport(&seg).unwrap().matrix;
        let d = 1 << g.len();
        let block = CMatrix::from_fn(2, 2, |i, j| u[(i * d, j * d)]);
        prop_assert!(linalg::max_abs(&(with_identity(&block, g) - &u)) < 1e-8);
        prop_assert!(linalg::unitarity_defect(&block) < 1e-8);
    }

    #[test]
    fn backward_run_inverts_the_forward_run(a in unit_axis(), b in unit_axis()) {
        let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        prop_assume!(dot > -0.9);
        let seg = segment(a, b, "Z", &Schedule::trig(1.0));
        let fwd = exact_adiabatic_transport(&seg).unwrap().matrix;
        let back = exact_adiabatic_transport(&seg.reversed()).unwrap().matrix;
        prop_assert!(linalg::max_abs(&(back * fwd - linalg::eye(4))) < 1e-8);
    }

    #[test]
    fn half_turns_give_v_theta_for_any_angle(theta in 0.0..std::f64::consts::TAU, minus in any::<bool>()) {
        let sign = if minus { -1.0 } else { 1.0 };
        let seg = segment([0.0, 0.0, 1.0], axis(theta, sign), "Z", &Schedule::linear(1.0));
        let u = exact_adiabatic_transport(&seg).unwrap().matrix;
        prop_assert!(linalg::fidelity(&with_identity(&v_gate(theta, sign), "Z"), &u) > 1.0 - 1e-8);
    }
}
