//! Cross-module checks: the same object computed by independent routes.

use loewner::borel::{borel_sum, borel_transform, BorelConfig};
use loewner::dynamics::{concatenation_check, solve_singular, trace_point, tip_residual, Driving, SolverConfig};
use loewner::exact::rat;
use loewner::series::{eval_series, holomorphic_coeffs, singular_minus_coeffs, singular_plus_coeffs, BranchSign};
use num_complex::Complex64;

fn ode_value(sign: BranchSign, tau: f64, cfg: &SolverConfig) -> (f64, f64) {
    let t = tau.powi(3);
    let base = solve_singular(sign, None, t, cfg).unwrap().final_value().re;
    let fine = solve_singular(sign, None, t, &cfg.tightened(1e-2)).unwrap().final_value().re;
    (base, (base - fine).abs() + cfg.rtol * fine.abs())
}

#[test]
fn borel_sum_matches_singular_flow() {
    let cfg = SolverConfig::default();
    for (sign, series) in [(BranchSign::Plus, singular_plus_coeffs(60)), (BranchSign::Minus, singular_minus_coeffs(60))] {
        let transform = borel_transform(&series).unwrap();
        for tau in [1e-3, 1e-2] {
            let b = borel_sum(tau, &transform, &BorelConfig::default()).unwrap();
            let (ode, ode_err) = ode_value(sign, tau, &cfg);
            assert!((b.value - ode).abs() <= b.error + ode_err, "{sign:?} tau={tau}: {} vs {ode}", b.value);
        }
    }
}

#[test]
fn holomorphic_series_matches_flow_inside_its_disk() {
    // f(ε, t) = ε + Σ a_n(ε) t^{n/3} for ∛t well inside the radius ≈ ε
    let eps = 0.1;
    let series = holomorphic_coeffs(&rat(1, 10), 80).unwrap();
    let cfg = SolverConfig::default();
    for tau in [0.01, 0.03] {
        let t: f64 = tau * tau * tau;
        let flow = loewner::dynamics::solve_forward(Complex64::new(eps, 0.0), 0.0, t, Driving::CubeRoot, &cfg)
            .unwrap()
            .final_value();
        let sum = eval_series(&series, t, 80).unwrap();
        assert!((flow.re - sum).abs() < 1e-9, "tau={tau}: {} vs {sum}", flow.re);
        assert_eq!(flow.im, 0.0);
    }
}

#[test]
fn trace_round_trip_and_semigroup() {
    let cfg = SolverConfig::default();
    for t in [1e-4, 1e-3, 1e-2] {
        let p = trace_point(t, Driving::CubeRoot, &cfg).unwrap();
        let r = tip_residual(p.gamma.unwrap(), t, Driving::CubeRoot, &cfg).unwrap();
        assert!(r <= 1e-6, "t={t}: {r}");
        assert_eq!(p.residual, Some(r));
    }
    let r = concatenation_check(Complex64::new(0.0, 2.0), 1e-3, 1e-2, &cfg).unwrap();
    assert!(r <= 10.0 * cfg.rtol);
}
