mod common;

use lefschetz::ideal::{hilbert_function, EngineConfig, IdealSpec, PowerIdealSpec, Reduction};
use lefschetz::lefschetz::{slp_test, wlp_test, Verdict};
use lefschetz::oracles::binomial;
use proptest::prelude::*;

fn cfg() -> EngineConfig {
    EngineConfig::default()
}

#[test]
fn random_binary_ideals_have_wlp() {
    for seed in 0..50 {
        let spec = common::random_binary_ideal(seed);
        let report = wlp_test(&spec, &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::Holds, "seed {seed}: {:?}", report.failing_degrees);
    }
}

#[test]
fn ternary_general_power_ideals_have_wlp() {
    for exps in [vec![4; 5], vec![1, 2, 3], vec![2, 2, 2, 2, 2, 2], vec![3, 3, 4, 4]] {
        let spec = IdealSpec::from(PowerIdealSpec::general(3, &exps));
        assert_eq!(wlp_test(&spec, &cfg()).unwrap().verdict, Verdict::Holds, "{exps:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn monomial_ci_has_wlp_and_slp(exps in prop::collection::vec(1usize..=4, 1..=4)) {
        let spec = IdealSpec::monomial_complete_intersection(&exps);
        prop_assert_eq!(wlp_test(&spec, &cfg()).unwrap().verdict, Verdict::Holds);
        prop_assert_eq!(slp_test(&spec, &cfg()).unwrap().verdict, Verdict::Holds);
    }

    #[test]
    fn monomial_ci_dimensions_sum_to_product(exps in prop::collection::vec(1usize..=5, 1..=4)) {
        let h = hilbert_function(&IdealSpec::monomial_complete_intersection(&exps), &cfg()).unwrap();
        prop_assert_eq!(h.length(), exps.iter().product::<usize>());
        prop_assert!(h.is_palindromic());
    }

    #[test]
    fn seed_does_not_change_generic_dimensions(r in 2usize..=6, seed in 1u64..1000) {
        let spec = IdealSpec::general_powers(r, r + 1, 2);
        let a = hilbert_function(&spec, &cfg()).unwrap();
        let b = hilbert_function(&spec, &EngineConfig::with_seed(seed)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn reductions_agree(r in 2usize..=5, extra in 1usize..=3) {
        let spec = IdealSpec::general_powers(r, r + extra, 2);
        let full = EngineConfig { reduction: Reduction::FullRing, ..cfg() };
        prop_assert_eq!(
            hilbert_function(&spec, &cfg()).unwrap(),
            hilbert_function(&spec, &full).unwrap()
        );
    }

    #[test]
    fn record_rank_never_exceeds_bound(seed in 0u64..200) {
        let spec = common::random_binary_ideal(seed);
        for rec in wlp_test(&spec, &cfg()).unwrap().records {
            prop_assert!(rec.rank <= rec.max_possible);
            prop_assert_eq!(rec.residual_dim + rec.rank, rec.dim_cur);
        }
    }

    #[test]
    fn squares_ci_is_binomial(r in 1usize..=8) {
        let h = hilbert_function(&IdealSpec::squares(r), &cfg()).unwrap();
        for j in 0..=r {
            prop_assert_eq!(binomial(r as i64, j as i64), h.get(j).into());
        }
    }
}
