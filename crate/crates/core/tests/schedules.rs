use holonome::schedules::{
    adiabatic_metrics, diabatic_error_closed_form, diabatic_error_numeric, Schedule, DIABATIC_TIME,
};
use proptest::prelude::*;

#[test]
fn closed_form_matches_integration() {
    for eps in [0.1, 0.05, 0.02] {
        let numeric = diabatic_error_numeric(&Schedule::trig(1.0), 1.0 / eps).unwrap();
        let closed = diabatic_error_closed_form(eps);
        assert!((numeric - closed).abs() < 1e-6, "eps {eps}: {numeric:e} vs {closed:e}");
    }
}

#[test]
fn bump_decays_faster_than_any_power() {
    let s = Schedule::bump(1.0);
    let d1 = diabatic_error_numeric(&s, 8.5).unwrap();
    let d2 = diabatic_error_numeric(&s, 17.0).unwrap();
    let d3 = diabatic_error_numeric(&s, 34.0).unwrap();
    assert!(d2 <= 1e-5, "{d2:e}");
    assert!(d3 / d2 < d2 / d1, "{d1:e} {d2:e} {d3:e}");
}

#[test]
fn gap_of_linear_half_turn() {
    let m = adiabatic_metrics(&Schedule::linear(10.0 * DIABATIC_TIME), std::f64::consts::FRAC_PI_2);
    assert!((m.min_gap - std::f64::consts::SQRT_2).abs() < 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn reparametrized_tau_stays_in_range(t in 0.0f64..5.0) {
        let s = Schedule::bump(5.0);
        let tau = s.tau(t);
        prop_assert!((0.0..=5.0 + 1e-12).contains(&tau));
    }
}
