use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use loewner::analysis::{majorant_lower_bound, majorant_profile};
use loewner::borel::{borel_transform, truncated_series};
use loewner::dynamics::{solve_forward, Driving, SolverConfig};
use loewner::exact::{parse_rational, rat, rational_string, Rational};
use loewner::series::residual::{branch_residual, holomorphic_residual, singular_residual};
use loewner::series::{
    branch_half_coeffs, eval_series, holomorphic_coeffs, coefficient_bounds, singular_minus_coeffs, singular_plus_coeffs,
    BranchSign,
};
use loewner::sweep;

fn small_rational() -> impl Strategy<Value = Rational> {
    (1i64..=60, 1i64..=60, any::<bool>()).prop_map(|(p, q, neg)| rat(if neg { -p } else { p }, q))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=40, 1i64..=40).prop_map(|(p, q)| rat(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coefficient_bounds_hold(n in 2usize..=60) {
        let r = &coefficient_bounds(n)[n - 2];
        prop_assert_eq!(r.n, n);
        prop_assert!(r.lower <= r.value && r.value <= r.upper);
    }

    #[test]
    fn plus_coefficients_are_integers_with_alternating_sign(n in 3usize..=80) {
        let a = singular_plus_coeffs(n).rational_coeffs().unwrap();
        prop_assert!(a.iter().all(|c| c.denom().is_one()));
        // a_n^+ = (-1)^n |a_n^+| from n = 3 on
        let last = &a[n - 1];
        prop_assert_eq!(last.is_negative(), n % 2 == 1);
    }

    #[test]
    fn singular_residuals_vanish(n in 3usize..=30) {
        prop_assert!(singular_residual(&singular_plus_coeffs(n)).unwrap().vanishes_through(n));
        prop_assert!(singular_residual(&singular_minus_coeffs(n)).unwrap().vanishes_through(n));
    }

    #[test]
    fn holomorphic_residual_vanishes(eps in small_rational(), n in 6usize..=18) {
        let s = holomorphic_coeffs(&eps, n).unwrap();
        prop_assert!(holomorphic_residual(&s).unwrap().vanishes_through(n - 1));
    }

    #[test]
    fn holomorphic_low_orders_scale_with_eps(eps in small_rational(), other in small_rational()) {
        let a = holomorphic_coeffs(&eps, 5).unwrap().rational_coeffs().unwrap();
        let b = holomorphic_coeffs(&other, 5).unwrap().rational_coeffs().unwrap();
        for n in 1..=5 {
            let scale = |x: &Rational, e: &Rational| x * num_traits::pow(e.clone(), n.max(2) - 2);
            prop_assert_eq!(scale(&a[n - 1], &eps), scale(&b[n - 1], &other));
        }
    }

    #[test]
    fn holomorphic_denominators_divide_the_scaled_bound(eps in small_rational(), n in 6usize..=25) {
        // n!·q·p^{n-2}·a_n(p/q) is an integer
        let a = holomorphic_coeffs(&eps, n).unwrap().rational_coeffs().unwrap();
        let (p, q) = (eps.numer().clone(), eps.denom().clone());
        let fact: BigInt = (1..=n).map(BigInt::from).product();
        let scaled = &a[n - 1] * Rational::from_integer(fact * q * num_traits::pow(p, n - 2));
        prop_assert!(scaled.denom().is_one());
    }

    #[test]
    fn branch_residual_vanishes(t0 in positive_rational(), n in 3usize..=10, plus in any::<bool>()) {
        let sign = if plus { BranchSign::Plus } else { BranchSign::Minus };
        let s = branch_half_coeffs(&t0, n, sign).unwrap();
        prop_assert!(branch_residual(&s).unwrap().vanishes_through(n - 1));
    }

    #[test]
    fn rationals_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let x = rat(p, q);
        prop_assert_eq!(parse_rational(&rational_string(&x)).unwrap(), x);
    }

    #[test]
    fn borel_truncation_matches_series_evaluation(tau in 1e-4f64..0.05, n in 1usize..=12) {
        let series = singular_plus_coeffs(40);
        let t = borel_transform(&series).unwrap();
        let a = truncated_series(&t, tau, n);
        let b = eval_series(&series, tau, n).unwrap();
        prop_assert!((a - b).abs() <= 1e-14 * b.abs().max(tau));
    }

    #[test]
    fn driving_drop_matches_difference(t in 1e-6f64..0.1, frac in 1e-3f64..1.0) {
        let s = frac * t;
        let d = Driving::CubeRoot;
        let naive = d.eval(t) - d.eval(t - s);
        prop_assert!((d.drop(t, s) - naive).abs() <= 1e-13 * t.cbrt());
    }

    #[test]
    fn majorant_is_a_proper_lower_bound(eps in 1e-6f64..2.0) {
        let m = majorant_lower_bound(eps).unwrap();
        prop_assert!(m.c > 0.0 && m.c < 1.0);
        prop_assert!(m.estimate.value > 0.0 && m.estimate.value < eps);
        for u in [0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
            prop_assert!(majorant_profile(eps, u * eps) <= m.estimate.value * (1.0 + 1e-12));
        }
    }

    #[test]
    fn sweeps_preserve_order(xs in proptest::collection::vec(-1e6f64..1e6, 0..200)) {
        let f = |x: &f64| x.sin() * 3.0;
        prop_assert_eq!(sweep::map(&xs, f), sweep::map_seq(&xs, f));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn zero_driving_closed_form(re in -3.0f64..3.0, im in 0.05f64..3.0, t in 0.01f64..2.0) {
        // stay off the hull [0, 2i√t]
        prop_assume!(re.abs() > 0.05 || im > 2.0 * t.sqrt() + 0.05);
        let z = Complex64::new(re, im);
        let f = solve_forward(z, 0.0, t, Driving::Zero, &SolverConfig::default()).unwrap().final_value();
        // root of z² + 4t in the upper half-plane
        let root = (z * z + 4.0 * t).sqrt();
        let want = if root.im < 0.0 { -root } else { root };
        prop_assert!((f - want).norm() <= 1e-8 * want.norm());
    }

    #[test]
    fn trajectories_stay_in_the_upper_half_plane(re in -1.0f64..1.0, im in 0.0f64..1.0, t in 1e-4f64..1e-2) {
        let z = Complex64::new(re, im);
        prop_assume!((z - Complex64::zero()).norm() > 0.05);
        let traj = solve_forward(z, 0.0, t, Driving::CubeRoot, &SolverConfig::default()).unwrap();
        prop_assert!(traj.samples.windows(2).all(|w| w[1].t > w[0].t));
        prop_assert!(traj.samples.iter().all(|s| s.f.im >= 0.0));
        if im == 0.0 {
            prop_assert!(traj.samples.iter().all(|s| s.f.im == 0.0));
        }
    }
}
