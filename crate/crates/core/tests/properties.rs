//! Randomized parameters for the exact identities, beyond the fixed grid.

use partition_lab::eppf::addition_residual;
use partition_lab::oracle::checks::{deletion_law_check, leem_check, tau_regen_check};
use partition_lab::oracle::law::exact_law;
use partition_lab::{Composition, ExtParams, Rational, Scalar};
use proptest::prelude::*;

// α = a/12 in [0, 1), θ = t/6 - α' with θ > -α
fn two_param() -> impl Strategy<Value = ExtParams<Rational>> {
    (0i64..12, 1i64..30).prop_map(|(a, t)| {
        let alpha = Rational::from_ratio(a, 12);
        let theta = Rational::from_ratio(t, 6) - alpha.clone();
        ExtParams::two_param(alpha, theta).unwrap()
    })
}

fn nonnegative() -> impl Strategy<Value = ExtParams<Rational>> {
    (0i64..12, 0i64..20)
        .prop_filter("not both zero", |(a, t)| *a + *t > 0)
        .prop_map(|(a, t)| ExtParams::two_param(Rational::from_ratio(a, 12), Rational::from_ratio(t, 4)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn law_totals_and_deletion(params in two_param(), n in 1usize..=6) {
        prop_assert_eq!(exact_law(&params, n).unwrap().total(), Rational::from_int(1));
        prop_assert_eq!(deletion_law_check(&params, n).unwrap(), Rational::from_int(0));
    }

    #[test]
    fn addition_rule(params in two_param(), parts in prop::collection::vec(1usize..4, 1..5)) {
        let lambda = Composition::new(parts).unwrap();
        prop_assert_eq!(addition_residual(&params, &lambda).unwrap(), Rational::from_int(0));
    }

    #[test]
    fn tau_regeneration(params in nonnegative(), n in 1usize..=5) {
        prop_assert_eq!(tau_regen_check(&params, n).unwrap().max(), Rational::from_int(0));
    }

    #[test]
    fn leem_float(x in prop::collection::vec(0.01f64..10.0, 1..=5), tau in 0.0f64..=1.0) {
        prop_assert!(leem_check(&x, &tau).unwrap() < 1e-12);
    }

    #[test]
    fn neg_alpha_deletion(m in 2u32..=5, a in 1i64..=4, n in 1usize..=5) {
        let params = ExtParams::neg_alpha(Rational::from_ratio(-a, 2), m).unwrap();
        prop_assert_eq!(deletion_law_check(&params, n).unwrap(), Rational::from_int(0));
    }
}
