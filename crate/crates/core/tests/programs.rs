use std::f64::consts::FRAC_1_SQRT_2;

use holonome::codes::{build_bacon_shor, CodeSpec, TrackedGroup};
use holonome::evolution::{Direction, SegmentForm};
use holonome::gates::Gate;
use holonome::linalg::{self, c, CMatrix, Limits};
use holonome::pauli::PauliOperator;
use holonome::programs::toffoli::{toffoli_context, toffoli_on_cat};
use holonome::programs::{
    check_group_consistency, compile, geometric_part, holonomy_cross_check, verify, verify_finite_time, weight_audit,
    CnotForm, CompileOptions, GateSpec, PathProgram, VerifyMethod, VerifyOptions,
};

fn trivial(n: usize) -> TrackedGroup {
    TrackedGroup::from_code(&CodeSpec::fresh(n))
}

fn bacon_shor() -> TrackedGroup {
    TrackedGroup::from_code(&build_bacon_shor(3))
}

fn two_blocks() -> TrackedGroup {
    TrackedGroup::blocks_of(&[build_bacon_shor(3), build_bacon_shor(3)])
}

fn opts() -> CompileOptions {
    CompileOptions::default()
}

fn vopts() -> VerifyOptions {
    VerifyOptions {
        limits: Limits::default(),
        ..VerifyOptions::default()
    }
}

fn p(s: &str) -> PauliOperator {
    s.parse().unwrap()
}

fn fidelity(program: &PathProgram) -> f64 {
    verify(program, &vopts()).unwrap().fidelity
}

const SINGLE: [Gate; 8] = [Gate::X, Gate::Y, Gate::Z, Gate::S, Gate::H, Gate::T, Gate::Sdg, Gate::Tdg];

/// `|0><0| (x) I + phase |1><1| (x) X` on (control, target).
fn cnot_like(phase: (f64, f64)) -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = c(1.0, 0.0);
    m[(1, 1)] = c(1.0, 0.0);
    m[(2, 3)] = c(phase.0, phase.1);
    m[(3, 2)] = c(phase.0, phase.1);
    m
}

#[test]
fn x_program_is_two_legs_giving_ix() {
    let prog = compile(&GateSpec::Single(Gate::X), &trivial(1), &[0], &opts()).unwrap();
    let segs: Vec<_> = prog.segments().collect();
    assert_eq!(segs.len(), 2);
    assert_eq!(segs[0].endpoint(false).unwrap(), p("Z"));
    assert_eq!(segs[0].endpoint(true).unwrap(), p("Y"));
    assert_eq!(segs[1].endpoint(true).unwrap(), p("-Z"));
    let u = geometric_part(&prog, false, &Limits::default()).unwrap();
    let ix = linalg::sigma_x() * c(0.0, 1.0);
    assert!(linalg::max_abs(&(u.matrix - ix)) < 1e-8);
}

#[test]
fn z_program_is_the_four_leg_loop() {
    let prog = compile(&GateSpec::Single(Gate::Z), &trivial(1), &[0], &opts()).unwrap();
    let ends: Vec<PauliOperator> = prog.segments().map(|s| s.endpoint(true).unwrap()).collect();
    assert_eq!(ends, vec![p("X"), p("-Z"), p("-Y"), p("Z")]);
    assert!(fidelity(&prog) > 1.0 - 1e-8);
}

#[test]
fn catalog_verifies_on_trivial_context() {
    for g in SINGLE {
        let prog = compile(&GateSpec::Single(g), &trivial(1), &[0], &opts()).unwrap();
        let f = fidelity(&prog);
        assert!(f > 1.0 - 1e-8, "{g:?}: {f}");
    }
    let t = compile(&GateSpec::Single(Gate::T), &trivial(1), &[0], &opts()).unwrap();
    let u = geometric_part(&t, true, &Limits::default()).unwrap();
    let pi8 = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        c(1.0, 0.0),
        c(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
    ]));
    assert!(linalg::fidelity(&u.matrix, &pi8) > 1.0 - 1e-8);
}

#[test]
fn empty_program_has_unit_fidelity() {
    let prog = PathProgram::empty("nothing", &trivial(2));
    let v = verify(&prog, &vopts()).unwrap();
    assert_eq!(v.fidelity, 1.0);
    assert_eq!(v.segments, 0);
}

#[test]
fn bacon_shor_single_qubit_gates_use_weight_two() {
    let g = bacon_shor();
    for q in 0..9 {
        for gate in SINGLE {
            let prog = compile(&GateSpec::Single(gate), &g, &[q], &opts()).unwrap();
            assert_eq!(weight_audit(&prog).max_weight, 2, "{gate:?} on {q}");
            let f = fidelity(&prog);
            assert!(f > 1.0 - 1e-8, "{gate:?} on {q}: {f}");
        }
    }
}

#[test]
fn bacon_shor_starting_element_is_the_row_pair() {
    let prog = compile(&GateSpec::Single(Gate::Z), &bacon_shor(), &[0], &opts()).unwrap();
    let first = prog.segments().next().unwrap();
    assert_eq!(first.endpoint(false).unwrap(), p("ZZIIIIIII"));
}

#[test]
fn cnot_pre_correction_forms() {
    let limits = Limits::default();
    let cases = [
        (CnotForm::Forward, trivial(2), (0.0, 1.0)),
        (CnotForm::XForm, x_context(), (0.0, 1.0)),
        (CnotForm::Backward, zz_context(), (0.0, -1.0)),
    ];
    for (form, ctx, phase) in cases {
        let prog = compile(&GateSpec::CnotWith(form), &ctx, &[0, 1], &opts()).unwrap();
        assert!(fidelity(&prog) > 1.0 - 1e-8, "{form:?}");
        let pre = geometric_part(&prog, false, &limits).unwrap();
        let expected = linalg::widen(&cnot_like(phase), &[0, 1], &pre.qubits);
        assert!(
            linalg::max_abs(&(pre.matrix - expected)) < 1e-8,
            "{form:?} pre-correction form"
        );
    }
}

/// Two qubits with `X` stabilizing the target and a spectator pair.
fn x_context() -> TrackedGroup {
    let code = CodeSpec {
        name: "x-target".into(),
        n: 3,
        k: 0,
        r: 0,
        stabilizers: vec![p("ZII"), p("IXZ")],
        gauge: vec![],
        logical_x: vec![],
        logical_z: vec![],
        layout: None,
    };
    TrackedGroup::from_code(&code)
}

/// Control and target sharing a `Z Z` element only.
fn zz_context() -> TrackedGroup {
    TrackedGroup::from_code(&zz_code())
}

fn zz_code() -> CodeSpec {
    CodeSpec {
        name: "zz".into(),
        n: 2,
        k: 0,
        r: 0,
        stabilizers: vec![p("ZZ")],
        gauge: vec![],
        logical_x: vec![],
        logical_z: vec![],
        layout: None,
    }
}

#[test]
fn backward_cnot_runs_segments_in_reverse() {
    let prog = compile(&GateSpec::CnotWith(CnotForm::Backward), &zz_context(), &[0, 1], &opts()).unwrap();
    let segs: Vec<_> = prog.segments().collect();
    assert_eq!(segs.len(), 2);
    assert!(segs.iter().all(|s| s.direction == Direction::Backward));
    assert_eq!(segs[0].form, SegmentForm::Controlled);
    assert_eq!(segs[0].expanded(0.0).as_single().unwrap(), p("-ZZ"));
    assert_eq!(prog.phase_corrections().next().unwrap().gate, Gate::S);
}

#[test]
fn clifford_programs_keep_the_tracked_group_consistent() {
    let cases: Vec<(GateSpec, TrackedGroup, Vec<usize>)> = vec![
        (GateSpec::Single(Gate::H), bacon_shor(), vec![4]),
        (GateSpec::Single(Gate::S), bacon_shor(), vec![2]),
        (GateSpec::Cnot, two_blocks(), vec![0, 9]),
        (GateSpec::TransversalCnot, two_blocks(), vec![]),
        (GateSpec::CatPrep, trivial(4), vec![0, 1, 2, 3]),
        (GateSpec::Cond(vec![Gate::X]), zz_and_block(), vec![0, 2]),
        (GateSpec::Cond(vec![Gate::S, Gate::H]), zz_and_block(), vec![1, 5]),
        (GateSpec::ViaIdentity(Gate::H), cat_and_block(), vec![2, 0]),
    ];
    for (spec, ctx, targets) in cases {
        let prog = compile(&spec, &ctx, &targets, &opts()).unwrap();
        let dev = check_group_consistency(&prog, &vopts()).unwrap();
        assert!(dev < 1e-10, "{spec}: {dev}");
    }
}

/// A `ZZ` pair followed by one Bacon-Shor block: no element flips qubit 0 or 1.
fn zz_and_block() -> TrackedGroup {
    TrackedGroup::blocks_of(&[zz_code(), build_bacon_shor(3)])
}

#[test]
fn conditional_drops_elements_that_flip_the_control() {
    let prog = compile(&GateSpec::Cond(vec![Gate::X]), &cat_and_block(), &[0, 2], &opts()).unwrap();
    assert_eq!(prog.group_after.dropped, prog.group_before.dropped + 1);
    assert!(check_group_consistency(&prog, &vopts()).is_err());
}

/// Two-qubit cat state followed by one Bacon-Shor block.
fn cat_and_block() -> TrackedGroup {
    TrackedGroup::blocks_of(&[CodeSpec::cat(2), build_bacon_shor(3)])
}

#[test]
fn conditional_programs_have_block_form() {
    let limits = Limits::default();
    for gates in [vec![Gate::X], vec![Gate::Z], vec![Gate::H], vec![Gate::S, Gate::H], vec![Gate::Y]] {
        let prog = compile(&GateSpec::Cond(gates.clone()), &cat_and_block(), &[0, 2], &opts()).unwrap();
        assert!(prog.segments().all(|s| s.form == SegmentForm::ConditionalGroup));
        let o = gates.iter().fold(linalg::eye(2), |acc, g| g.matrix() * acc);
        let mut block = linalg::eye(4);
        block.view_mut((2, 2), (2, 2)).copy_from(&o);
        let u = geometric_part(&prog, true, &limits).unwrap();
        let expected = linalg::widen(&block, &[0, 2], &u.qubits);
        assert!(linalg::max_abs(&(u.matrix - expected)) < 1e-8, "{gates:?}");
        assert_eq!(weight_audit(&prog).max_weight, 3);
    }
}

#[test]
fn cat_preparation_builds_the_cat_state() {
    let prog = compile(&GateSpec::CatPrep, &trivial(4), &[0, 1, 2, 3], &opts()).unwrap();
    assert!(fidelity(&prog) > 1.0 - 1e-8);
    assert_eq!(weight_audit(&prog).max_weight, 2);
    let u = geometric_part(&prog, true, &Limits::default()).unwrap();
    let cat = u.matrix.column(0);
    let s = FRAC_1_SQRT_2;
    assert!((cat[0] - c(s, 0.0)).norm() < 1e-8 && (cat[15] - c(s, 0.0)).norm() < 1e-8);
    // The tracked group is the cat-state group, signs included.
    for stab in CodeSpec::cat(4).stabilizers {
        let mut psi: Vec<_> = cat.iter().copied().collect();
        let before = psi.clone();
        stab.apply(&mut psi);
        assert!(psi.iter().zip(&before).all(|(a, b)| (a - b).norm() < 1e-8), "{stab}");
    }
}

#[test]
fn cat_parity_stays_at_weight_two() {
    let ctx = TrackedGroup::blocks_of(&[CodeSpec::cat(2), CodeSpec::fresh(1)]);
    let prog = compile(&GateSpec::CatParity, &ctx, &[0, 1, 2], &opts()).unwrap();
    assert!(fidelity(&prog) > 1.0 - 1e-8);
    assert_eq!(weight_audit(&prog).max_weight, 2);
}

#[test]
fn identity_start_route() {
    let ctx = cat_and_block();
    for g in [Gate::Z, Gate::I, Gate::H, Gate::T, Gate::Sdg] {
        let prog = compile(&GateSpec::ViaIdentity(g), &ctx, &[2, 0], &opts()).unwrap();
        let f = fidelity(&prog);
        assert!(f > 1.0 - 1e-8, "{g:?}: {f}");
        assert!(weight_audit(&prog).max_weight <= 3);
    }
    // The first leg followed by its exact reverse is the identity.
    let prog = compile(&GateSpec::ViaIdentity(Gate::Z), &ctx, &[2, 0], &opts()).unwrap();
    let first = prog.segments().next().unwrap().clone();
    let mut undo = PathProgram::empty("undo", &ctx);
    undo.steps.push(holonome::programs::ProgramStep::Segment(first.clone()));
    undo.steps.push(holonome::programs::ProgramStep::Segment(first.reversed()));
    let u = geometric_part(&undo, false, &Limits::default()).unwrap();
    assert!(linalg::max_abs(&(&u.matrix - linalg::eye(u.matrix.nrows()))) < 1e-8);
}

#[test]
fn transversal_cnot_needs_the_backward_run_for_weight_three() {
    let prog = compile(&GateSpec::TransversalCnot, &two_blocks(), &[], &opts()).unwrap();
    let audit = weight_audit(&prog);
    assert_eq!(audit.max_weight, 3);
    assert!(prog.segments().any(|s| s.direction == Direction::Backward));
    let v = verify(&prog, &vopts()).unwrap();
    assert_eq!(v.method, VerifyMethod::StateVector);
    assert!(v.fidelity > 1.0 - 1e-8, "{}", v.fidelity);
    // Forward-only compilation needs a weight-four Hamiltonian.
    let budget = CompileOptions {
        weight_budget: Some(3),
        ..opts()
    };
    let mut b = holonome::programs::ProgramBuilder::new("fwd", &two_blocks(), &budget);
    let err = (0..9).try_for_each(|q| b.cnot(q, q + 9, &[CnotForm::Forward]).map(|_| ()));
    assert!(matches!(err, Err(holonome::Error::WeightBudget { weight: 4, .. })), "{err:?}");
}

#[test]
fn toffoli_on_cat_verifies_at_weight_three() {
    let budget = CompileOptions {
        weight_budget: Some(3),
        ..opts()
    };
    let prog = toffoli_on_cat(4, &budget).unwrap();
    assert_eq!(prog.n_qubits, 22);
    assert_eq!(weight_audit(&prog).max_weight, 3);
    let f = fidelity(&prog);
    assert!(f > 1.0 - 1e-8, "{f}");
    let (_, q) = toffoli_context(4);
    let toffoli = compile(&GateSpec::ToffoliOnCat, &toffoli_context(4).0, &q, &opts()).unwrap();
    assert_eq!(toffoli.segments().count(), prog.segments().count());
}

#[test]
fn transport_agrees_with_frame_holonomy_on_catalog_programs() {
    let mut programs: Vec<PathProgram> = SINGLE
        .iter()
        .map(|&g| compile(&GateSpec::Single(g), &trivial(1), &[0], &opts()).unwrap())
        .collect();
    programs.push(compile(&GateSpec::CnotWith(CnotForm::Forward), &trivial(2), &[0, 1], &opts()).unwrap());
    programs.push(compile(&GateSpec::CnotWith(CnotForm::XForm), &x_context(), &[0, 1], &opts()).unwrap());
    programs.push(compile(&GateSpec::CnotWith(CnotForm::Backward), &zz_context(), &[0, 1], &opts()).unwrap());
    for prog in &programs {
        let dev = holonomy_cross_check(prog).unwrap();
        assert!(dev < 1e-8, "{}: {dev}", prog.name);
    }
}

#[test]
fn finite_time_fidelity_improves_with_duration() {
    let prog = compile(&GateSpec::Single(Gate::X), &bacon_shor(), &[0], &opts()).unwrap();
    let slow = verify_finite_time(&prog, 40.0, &vopts()).unwrap();
    let fast = verify_finite_time(&prog, 4.0, &vopts()).unwrap();
    assert!(slow.fidelity > 1.0 - 1e-3, "{slow:?}");
    assert!(slow.max_diabatic < fast.max_diabatic);
}

#[test]
fn programs_round_trip_through_json() {
    let prog = compile(&GateSpec::Cond(vec![Gate::H]), &cat_and_block(), &[0, 2], &opts()).unwrap();
    let back = PathProgram::from_json(&prog.to_json().unwrap()).unwrap();
    assert_eq!(back, prog);
    assert!(PathProgram::from_json("{\"name\": 3}").is_err());
}
