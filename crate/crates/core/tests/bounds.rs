use cbcdbd_core::bounds::{
    check_h_bound_general, check_h_induction, check_prop1, check_thm2, h_upper_bound,
    prop1_factor, thm2_rhs,
};
use cbcdbd_core::construct::{cbc_dbd, ConstructionConfig};
use cbcdbd_core::lattice::{h_direct, h_direct_enumerated, GeneratingVector};
use cbcdbd_core::weights::{GeneralWeights, PodWeights, ProductWeights, WeightScheme};
use cbcdbd_core::{Limits, Subset};
use proptest::prelude::*;

fn constructed(n: u32, s: usize, scheme: &WeightScheme) -> GeneratingVector {
    let config = ConstructionConfig::new(n, s, scheme.clone()).with_diagnostics(false);
    cbc_dbd(&config).unwrap().vector
}

fn general_strategy(s: usize) -> impl Strategy<Value = WeightScheme> {
    prop::collection::vec(0.01..1.0f64, (1 << s) - 1).prop_map(move |values| {
        GeneralWeights::from_fn(s, |u| values[u.bits() as usize - 1], &Limits::default())
            .unwrap()
            .into()
    })
}

#[test]
fn h_of_first_unit_vector() {
    let limits = Limits::default();
    let scheme: WeightScheme = ProductWeights::new(vec![1.0]).unwrap().into();
    for n in 1..=12u32 {
        let gv = GeneratingVector::new(n, vec![1]).unwrap();
        let h = h_direct(&scheme, &gv, &limits).unwrap();
        let closed = 4f64.ln() * ((1u64 << n) - u64::from(n) - 1) as f64;
        assert!((h - closed).abs() <= 1e-12 * closed.max(1e-300), "n={n}: {h} vs {closed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn general_weight_constructions_satisfy_h_bounds(
        n in 1u32..=7,
        scheme in general_strategy(4),
    ) {
        let limits = Limits::default();
        let gv = constructed(n, 4, &scheme);
        prop_assert!(check_h_bound_general(&scheme, &gv, &limits).unwrap().satisfied);
        for r in 2..=4 {
            let report = check_h_induction(&scheme, &gv, r, &limits).unwrap();
            prop_assert!(report.satisfied, "r={} {:?}", r, report);
            prop_assert!(report.note.is_none());
        }
    }

    #[test]
    fn thm2_and_prop1_on_small_constructions(
        n in 1u32..=4,
        s in 1usize..=3,
        gammas in prop::collection::vec(0.01..1.0f64, 3),
    ) {
        let limits = Limits::default();
        let scheme: WeightScheme = PodWeights::new(vec![1.0, 1.0, 2.0, 6.0], gammas).unwrap().into();
        let gv = constructed(n, s, &scheme);
        let thm2 = check_thm2(&scheme, &gv, &limits).unwrap();
        prop_assert!(thm2.satisfied, "{:?}", thm2);
        let prop1 = check_prop1(2, &scheme, &gv, &limits).unwrap();
        prop_assert!(prop1.lhs >= 0.0);
        prop_assert!(prop1.satisfied, "{:?}", prop1);
    }

    #[test]
    fn right_hand_sides_grow_with_any_weight(
        scheme in general_strategy(3),
        which in 1u64..8,
        factor in 1.0..3.0f64,
        n in 1u32..=8,
    ) {
        let limits = Limits::default();
        let bumped: WeightScheme = GeneralWeights::from_fn(3, |u| {
            let g = scheme.gamma(u).unwrap();
            if u == Subset::from_bits(which) { g * factor } else { g }
        }, &limits).unwrap().into();
        prop_assert!(h_upper_bound(&bumped, n, 3, &limits).unwrap() >= h_upper_bound(&scheme, n, 3, &limits).unwrap());
        // the estimate subtracts ∑ γ_u (log 4)^{|u|}, so H has to move with the weights
        let gv = GeneratingVector::new(n, vec![1, (1 << n) - 1, 1 | (5 % (1u64 << n))]).unwrap();
        let h_before = h_direct(&scheme, &gv, &limits).unwrap();
        let h_after = h_direct(&bumped, &gv, &limits).unwrap();
        prop_assert!(thm2_rhs(&bumped, n, 3, h_after, &limits).unwrap() >= thm2_rhs(&scheme, n, 3, h_before, &limits).unwrap());
        prop_assert!(prop1_factor(2.0, &bumped, 3, &limits).unwrap() >= prop1_factor(2.0, &scheme, 3, &limits).unwrap());
    }
}

#[test]
fn shifted_pod_h_uses_factored_form() {
    let limits = Limits::default();
    let scheme: WeightScheme =
        PodWeights::new(vec![1.0, 0.5, 2.0, 0.25, 3.0], vec![0.9, 0.4, 0.6, 0.8])
            .unwrap()
            .into();
    let gv = constructed(6, 3, &scheme);
    let shifted = scheme.shifted(Subset::singleton(4)).unwrap();
    let fast = h_direct(&shifted, &gv, &limits).unwrap();
    let slow = h_direct_enumerated(&shifted, &gv, &limits).unwrap();
    assert!((fast - slow).abs() <= 1e-12 * slow);
}
