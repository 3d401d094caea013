use num_traits::Zero;

use super::*;
use crate::exact::{int, to_f64};
use crate::series::{holomorphic_coeffs, singular_minus_coeffs, singular_plus_coeffs};

fn plus(n: usize) -> BorelTransform {
    borel_transform(&singular_plus_coeffs(n)).unwrap()
}

#[test]
fn transform_divides_by_factorials() {
    let t = plus(5);
    assert_eq!(t.coeffs()[0], int(1));
    assert_eq!(t.coeffs()[2], int(-12));
    assert_eq!(t.coeffs()[3], int(90));
    assert_eq!(t.family(), Family::SingularPlus);
}

#[test]
fn radius_estimate_sits_between_coefficient_bounds() {
    let r = plus(200).radius_estimate();
    let lo = 1.0 / (12.0 * std::f64::consts::E);
    assert!(lo <= r && r <= 1.0 / 6.0, "{r}");
}

#[test]
fn transform_rejects_other_families() {
    let hol = holomorphic_coeffs(&int(1), 10).unwrap();
    assert!(borel_transform(&hol).unwrap_err().is_precondition());
}

#[test]
fn linear_truncation_vanishes_at_origin() {
    let r = pade_continuation(&plus(4), 1, 0).unwrap();
    assert_eq!(r.eval(0.0), 0.0);
    assert_eq!(r.eval(0.5), 0.5);
    assert!(pade_continuation(&plus(4), 3, 2).unwrap_err().is_precondition());
}

#[test]
fn pade_matches_direct_sum_inside_disk() {
    let t = plus(200);
    let r = pade_continuation(&t, 6, 6).unwrap();
    let z = 1.0 / 24.0;
    let direct = t.partial_sum(z, 200);
    assert!(((r.eval(z) - direct) / direct).abs() < 1e-10, "{} vs {direct}", r.eval(z));
}

#[test]
fn pade_poles_are_reported() {
    let r = pade_continuation(&plus(20), 6, 6).unwrap();
    let poles = r.positive_real_poles();
    assert!(!poles.is_empty());
    for p in &poles {
        assert!(r.eval_denominator(*p).abs() < 1e-8);
        assert!(*p > 1.0 / 6.0 - 1e-12, "continuation poles lie outside the disk: {p}");
    }
}

#[test]
fn pade_reproduces_maclaurin_series() {
    let t = plus(16);
    let r = pade_continuation(&t, 8, 8).unwrap();
    // P - T_16 Q has no terms below ζ^17
    let s = r.remainder_numerator(t.coeffs(), 16).unwrap();
    assert!(s.iter().any(|c| !c.is_zero()));
    assert_eq!(r.denominator()[0], int(1));
    assert_eq!(r.numerator()[0], int(0));
}

#[test]
fn sum_edge_cases() {
    let t = plus(30);
    let cfg = BorelConfig::default();
    assert_eq!(borel_sum(0.0, &t, &cfg).unwrap().value, 0.0);
    assert!(borel_sum(-1e-3, &t, &cfg).unwrap_err().is_precondition());
    assert!(borel_sum(f64::NAN, &t, &cfg).unwrap_err().is_precondition());
}

#[test]
fn sum_follows_leading_coefficients() {
    let t = plus(30);
    let tau = 1e-3;
    let h = borel_sum(tau, &t, &BorelConfig::default()).unwrap();
    let two = tau + 6.0 * tau * tau;
    assert!((h.value - two).abs() <= 100.0 * tau.powi(3));
    let three = two - 72.0 * tau.powi(3);
    assert!((h.value - three).abs() <= 10.0 * 2160.0 * tau.powi(4));
    assert!(h.error < 1e-12);
    assert_eq!(h.order, (8, 8));
}

#[test]
fn remainder_is_next_term_to_leading_order() {
    let t = plus(30);
    let cfg = BorelConfig::default();
    for n in 1..=4 {
        let tau = 1e-4;
        let r = borel_remainder(tau, &t, n, &cfg).unwrap();
        let next = to_f64(&t.coeffs()[n]) * crate::exact::to_f64(&Rational::from_integer(factorial(n as u64 + 1)));
        let lead = next * tau.powi(n as i32 + 1);
        assert!(((r.value - lead) / lead).abs() < 0.05, "n={n}: {} vs {lead}", r.value);
    }
}

#[test]
fn pole_on_ray_falls_down_the_ladder() {
    let t = plus(30);
    let only_66 = BorelConfig { ladder: vec![(6, 6)], ..BorelConfig::default() };
    let err = borel_sum(0.2, &t, &only_66).unwrap_err();
    assert!(matches!(err, Error::PoleOnRay { .. }), "{err}");
}

#[test]
fn minus_family_uses_the_same_pipeline() {
    let t = borel_transform(&singular_minus_coeffs(30)).unwrap();
    let tau = 1e-3;
    let h = borel_sum(tau, &t, &BorelConfig::default()).unwrap();
    let lead = -3.0 * tau * tau + 6.0 * tau.powi(3);
    assert!((h.value - lead).abs() < 30.0 * tau.powi(4));
}

#[test]
fn series_terms_eventually_grow() {
    // |a_{n+1}/a_n| ~ 6n, so terms grow once n exceeds about 1/(6τ)
    let a = singular_plus_coeffs(300);
    for tau in [1e-3f64, 1e-2, 1e-1] {
        let ln: Vec<f64> = (1..=300)
            .map(|n| crate::exact::ln_abs(a.coeff(n).as_rational().unwrap()) + n as f64 * tau.ln())
            .collect();
        assert!(ln[250..].windows(2).all(|w| w[1] > w[0]), "tau={tau}");
    }
}
