use std::f64::consts::PI;

use holonome::holonomy::{
    berry_phase_segment, canonical_gauge, linear_loop_frames, most_parallel_frame, phase_distance, randomize_gauge,
    transport, z_gate_holonomy, EigenFramePath,
};
use holonome::linalg::{self, c, CMatrix};
use holonome::schedules::Interpolation;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXPECTED_LEGS: [[f64; 2]; 4] = [[0.0, PI], [0.0, 0.0], [PI / 2.0, 0.0], [0.0, PI / 2.0]];

#[test]
fn z_loop_holonomy_both_interpolations() {
    for interp in [Interpolation::Linear, Interpolation::Trig] {
        let rep = z_gate_holonomy(&interp, 2048, false).unwrap();
        assert!(phase_distance(rep.phases[0], PI / 2.0) < 1e-8, "{interp:?} {:?}", rep.phases);
        assert!(phase_distance(rep.phases[1], 3.0 * PI / 2.0) < 1e-8, "{interp:?} {:?}", rep.phases);
        assert!(rep.off_diagonal < 1e-8);
        for (leg, want) in rep.leg_phases.iter().zip(EXPECTED_LEGS) {
            assert!(phase_distance(leg[0], want[0]) < 1e-8 && phase_distance(leg[1], want[1]) < 1e-8);
        }
    }
}

#[test]
fn closed_form_frames_give_the_same_table() {
    let rep = z_gate_holonomy(&Interpolation::Linear, 1024, true).unwrap();
    for (leg, want) in rep.leg_phases.iter().zip(EXPECTED_LEGS) {
        assert!(phase_distance(leg[0], want[0]) < 1e-9 && phase_distance(leg[1], want[1]) < 1e-9);
    }
    let m = rep.matrix();
    assert!((m[(0, 0)] - c(0.0, 1.0)).norm() < 1e-9);
    assert!((m[(1, 1)] - c(0.0, -1.0)).norm() < 1e-9);
}

#[test]
fn closed_form_frames_meet_at_junctions() {
    for leg in 1..4 {
        let (a0, a1) = linear_loop_frames(leg, 1.0).unwrap();
        let (b0, b1) = linear_loop_frames(leg + 1, 0.0).unwrap();
        assert!(linalg::max_abs(&(a0 - b0)) < 1e-12, "chi0 at junction {leg}");
        assert!(linalg::max_abs(&(a1 - b1)) < 1e-12, "chi1 at junction {leg}");
    }
    let (end0, end1) = linear_loop_frames(4, 1.0).unwrap();
    let (start0, start1) = linear_loop_frames(1, 0.0).unwrap();
    assert!(linalg::max_abs(&(end0 - start0)) < 1e-12);
    assert!(linalg::max_abs(&(end1 - start1)) < 1e-12);
    for leg in 1..=4 {
        for s in [0.0, 1.0] {
            let (x0, _) = linear_loop_frames(leg, s).unwrap();
            assert!(linalg::max_abs(&(canonical_gauge(&x0) - &x0)) < 1e-12);
        }
    }
}

fn loop_path(samples: usize) -> EigenFramePath {
    let mut frames = Vec::new();
    for leg in 1..=4 {
        for k in 0..=samples {
            if leg > 1 && k == 0 {
                continue;
            }
            let (x0, x1) = linear_loop_frames(leg, k as f64 / samples as f64).unwrap();
            let mut w = CMatrix::zeros(4, 2);
            w.set_column(0, &linalg::kron(&x0, &CMatrix::from_column_slice(2, 1, &[c(1.0, 0.0), c(0.0, 0.0)])).column(0));
            w.set_column(1, &linalg::kron(&x1, &CMatrix::from_column_slice(2, 1, &[c(0.0, 0.0), c(1.0, 0.0)])).column(0));
            frames.push(w);
        }
    }
    EigenFramePath::new(frames, true).unwrap()
}

#[test]
fn transport_is_gauge_invariant() {
    let path = loop_path(512);
    let base = transport(&path).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let shuffled = randomize_gauge(&path, &mut rng, 0.8);
        let hol = transport(&shuffled).unwrap();
        assert!(linalg::max_abs(&(hol - &base)) < 1e-8);
    }
}

#[test]
fn berry_phase_of_a_phase_ramp() {
    let frames: Vec<CMatrix> = (0..=100)
        .map(|k| CMatrix::from_column_slice(2, 1, &[c(0.0, 0.0), c((0.3 * k as f64 / 100.0).cos(), (0.3 * k as f64 / 100.0).sin())]))
        .collect();
    let phi = berry_phase_segment(&frames)[0];
    assert!((phi.im + 0.3).abs() < 1e-12);
}

#[test]
fn most_parallel_frame_maximizes_overlap() {
    let w = CMatrix::from_column_slice(2, 1, &[c(1.0, 0.0), c(0.0, 0.0)]);
    let v = CMatrix::from_column_slice(2, 1, &[c(0.0, 0.6), c(0.8, 0.0)]);
    let best = most_parallel_frame(&w, &v).unwrap();
    let ov = best.column(0).dotc(&w.column(0));
    assert!(ov.im.abs() < 1e-14 && (ov.re - 0.6).abs() < 1e-14);
}

#[test]
fn rejects_undersampled_and_open_loops() {
    let a = CMatrix::from_column_slice(2, 1, &[c(1.0, 0.0), c(0.0, 0.0)]);
    let b = CMatrix::from_column_slice(2, 1, &[c(0.0, 0.0), c(1.0, 0.0)]);
    assert!(EigenFramePath::new(vec![a.clone(), b.clone()], false).is_err());
    let mid = CMatrix::from_column_slice(2, 1, &[c(0.8, 0.0), c(0.6, 0.0)]);
    assert!(EigenFramePath::new(vec![a, mid], true).is_err());
}
