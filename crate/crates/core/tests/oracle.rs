use porofrac::contact::ContactSet;
use porofrac::oracle::{audit_setup, consolidation_check, jacobian_audit, StateScales};
use proptest::prelude::*;

#[test]
fn consolidation_error_shrinks_under_refinement() {
    // Cell size and step are halved together.
    let errors: Vec<f64> = [(10, 4e-3), (20, 2e-3), (40, 1e-3)]
        .iter()
        .map(|&(n, dt)| consolidation_check(n, dt, 0.1).unwrap().l2_error)
        .collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
    assert!(errors[2] <= 0.02, "{errors:?}");
}

#[test]
fn first_step_stays_below_the_undrained_pressure() {
    let r = consolidation_check(50, 1e-4, 0.01).unwrap();
    assert!(r.overshoot <= 0.05, "{r:?}");
    assert!(r.first_step_max > 0.5 * r.initial_pressure, "{r:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn linearization_matches_differences(seed in 0u64..10_000, set in 0usize..3) {
        let target = [ContactSet::Open, ContactSet::Stick, ContactSet::Slide][set];
        let (mut disc, params) = audit_setup(2).unwrap();
        let scales = StateScales { u: 1e-3, p: 1e6, lambda: 1e6 };
        let a = jacobian_audit(&mut disc, params, target, &scales, 3, 1e-6, seed).unwrap();
        prop_assert!(a.mismatch <= 1e-5, "{a:?}");
    }
}
