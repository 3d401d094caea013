use num_complex::Complex64;

use super::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

#[test]
fn zero_driving_matches_closed_form() {
    let traj = solve_forward(c(1.0, 1.0), 0.0, 1.0, Driving::Zero, &cfg()).unwrap();
    let f = traj.final_value();
    assert!((f - c(2.0582, 0.4859)).norm() < 1e-4);
    let want = (c(1.0, 1.0) * c(1.0, 1.0) + 4.0).sqrt();
    assert!((f - want).norm() < 1e-9 * want.norm());
    assert!(traj.samples.windows(2).all(|w| w[1].t > w[0].t));
}

#[test]
fn zero_driving_tip_reaches_driving_point() {
    // 2i is the tip of the hull at t = 1: the flow ends on the driving point
    let traj = solve_forward(c(0.0, 2.0), 0.0, 1.0, Driving::Zero, &cfg()).unwrap();
    assert!(traj.final_value().norm() < 1e-3);
    let early = solve_forward(c(0.0, 2.0), 0.0, 0.75, Driving::Zero, &cfg()).unwrap();
    assert!((early.final_value() - c(0.0, 1.0)).norm() < 1e-8, "{}", early.final_value());
    let err = solve_forward(c(0.0, 2.0), 0.0, 1.5, Driving::Zero, &cfg()).unwrap_err();
    assert!(matches!(err, Error::SingularApproach { .. }), "{err}");
}

#[test]
fn hydrodynamic_normalization() {
    let mut constants = Vec::new();
    for r in [10.0, 30.0, 100.0] {
        let z = c(0.0, r);
        let f = solve_forward(z, 0.0, 0.01, Driving::CubeRoot, &cfg()).unwrap().final_value();
        constants.push((f - z - 0.02 / z).norm() * r * r);
    }
    assert!(constants.iter().all(|&k| k < 0.05), "{constants:?}");
}

#[test]
fn real_seeds_stay_real() {
    let traj = solve_forward(c(0.3, 0.0), 0.0, 0.01, Driving::CubeRoot, &cfg()).unwrap();
    assert!(traj.samples.iter().all(|s| s.f.im == 0.0));
    assert!(traj.samples.iter().all(|s| s.f.im >= 0.0));
}

#[test]
fn forward_preconditions() {
    assert!(solve_forward(c(1.0, 1.0), 0.1, 0.1, Driving::Zero, &cfg()).unwrap_err().is_precondition());
    assert!(solve_forward(c(1.0, -1.0), 0.0, 0.1, Driving::Zero, &cfg()).unwrap_err().is_precondition());
    assert!(Driving::shifted(0.0).is_err());
    let bad = SolverConfig { n_seed: 2, ..cfg() };
    assert!(solve_forward(c(1.0, 1.0), 0.0, 0.1, Driving::Zero, &bad).unwrap_err().is_precondition());
}

#[test]
fn driving_drop_is_accurate() {
    let d = Driving::CubeRoot;
    let t: f64 = 1e-3;
    let s = 1e-14;
    let naive_scale = t.cbrt() / (3.0 * t) * s;
    assert!((d.drop(t, s) / naive_scale - 1.0).abs() < 1e-9);
    assert_eq!(d.drop(t, t), t.cbrt());
    assert_eq!(Driving::Zero.drop(1.0, 0.5), 0.0);
}

#[test]
fn plus_singular_matches_asymptotics() {
    let traj = solve_singular(BranchSign::Plus, Some(1e-12), 1e-3, &cfg()).unwrap();
    let rem = |s: &Sample| {
        let tau = s.t.cbrt();
        s.offset.re - 6.0 * tau * tau + 72.0 * s.t
    };
    // f_1 - (∛t + 6∛t² - 72t) = o(t) over [1e-8, 1e-3]
    let lo = traj.samples.iter().find(|s| s.t >= 1e-8).unwrap();
    let hi = traj.last();
    let slope = (rem(hi).abs().ln() - rem(lo).abs().ln()) / (hi.t.ln() - lo.t.ln());
    assert!(slope > 1.0, "slope {slope}");
    // deep in the asymptotic range the remainder is the next term 2160 t^{4/3}
    for s in traj.samples.iter().filter(|s| s.t > 1e-11 && s.t < 1e-8) {
        let next = 2160.0 * s.t.cbrt().powi(4);
        assert!((rem(s) / next - 1.0).abs() < 0.15, "t={}", s.t);
    }
}

#[test]
fn minus_singular_leading_term() {
    let traj = solve_singular(BranchSign::Minus, Some(1e-8), 1e-3, &cfg()).unwrap();
    for s in traj.samples.iter().step_by(7) {
        let tau = s.t.cbrt();
        let lead = -3.0 * tau * tau;
        assert!(((s.f.re - lead) / lead).abs() < 5.0 * tau, "t={}", s.t);
    }
}

#[test]
fn singular_pair_brackets_the_driving_function() {
    let plus = solve_singular(BranchSign::Plus, None, 1e-3, &cfg()).unwrap();
    let minus = solve_singular(BranchSign::Minus, None, 1e-3, &cfg()).unwrap();
    assert!(plus.samples.iter().all(|s| s.offset.re > 0.0));
    assert!(minus.samples.iter().all(|s| s.offset.re < 0.0));
    assert!(plus.final_value().re > 0.1 && minus.final_value().re < 0.0);
}

#[test]
fn seed_order_robustness() {
    let base = solve_singular(BranchSign::Plus, Some(1e-12), 1e-3, &SolverConfig { n_seed: 3, ..cfg() }).unwrap();
    let fine = solve_singular(BranchSign::Plus, Some(0.25e-12), 1e-3, &SolverConfig { n_seed: 5, ..cfg() }).unwrap();
    assert!((base.final_value() - fine.final_value()).norm() < 1e-8);
    let base = solve_singular(BranchSign::Minus, Some(1e-12), 1e-3, &SolverConfig { n_seed: 3, ..cfg() }).unwrap();
    let fine = solve_singular(BranchSign::Minus, Some(0.25e-12), 1e-3, &SolverConfig { n_seed: 5, ..cfg() }).unwrap();
    assert!((base.final_value() - fine.final_value()).norm() < 1e-8);
}

#[test]
fn singular_preconditions() {
    assert!(solve_singular(BranchSign::Plus, Some(1e-3), 1e-4, &cfg()).unwrap_err().is_precondition());
    assert!(solve_singular(BranchSign::Plus, Some(0.0), 1e-4, &cfg()).unwrap_err().is_precondition());
}

#[test]
fn branch_starts_like_square_root() {
    let t0 = 1e-3;
    let traj = solve_branch(t0, BranchSign::Plus, 2e-3, &cfg()).unwrap();
    let mut pts = Vec::new();
    for s in &traj.samples {
        let dt = s.t - t0;
        if dt < 1e-5 {
            let rem = s.f.re - t0.cbrt() - 2.0 * dt.sqrt();
            pts.push((dt.ln(), rem.abs().ln()));
        }
    }
    // remainder is O(t - t0): slope about 1 against log(t - t0), i.e. o(√(t - t0))
    let (a, b) = (pts[0], *pts.last().unwrap());
    let slope = (b.1 - a.1) / (b.0 - a.0);
    assert!(slope > 0.75, "slope {slope}");
    match traj.seed {
        Seed::BranchPoint { seed_residual, delta, .. } => {
            assert!(seed_residual < 1e-4);
            assert!((delta - 1e-7).abs() < 1e-20);
        }
        _ => unreachable!(),
    }
}

#[test]
fn branch_pair_and_monotone_gap() {
    let t0 = 1e-3;
    let plus = solve_branch(t0, BranchSign::Plus, 1e-2, &cfg()).unwrap();
    let minus = solve_branch(t0, BranchSign::Minus, 1e-2, &cfg()).unwrap();
    assert!(plus.samples.iter().all(|s| s.offset.re > 0.0));
    assert!(minus.samples.iter().all(|s| s.offset.re < 0.0));
    assert!(plus.samples.windows(2).all(|w| w[1].offset.re > w[0].offset.re));
}

#[test]
fn branch_preconditions() {
    assert!(solve_branch(1e-2, BranchSign::Plus, 1e-3, &cfg()).unwrap_err().is_precondition());
    assert!(solve_branch(1e-2, BranchSign::Plus, 0.5, &cfg()).unwrap_err().is_precondition());
    let strict = SolverConfig { seed_tol: 1e-30, ..cfg() };
    assert!(matches!(solve_branch(1e-3, BranchSign::Plus, 1e-2, &strict).unwrap_err(), Error::SeedValidation { .. }));
}

#[test]
fn zero_driving_trace_is_vertical_segment() {
    let p = trace_point(1.0, Driving::Zero, &cfg()).unwrap();
    assert!((p.gamma.unwrap() - c(0.0, 2.0)).norm() < 1e-9);
    let curve = trace_curve(&[0.25, 1.0, 4.0], Driving::Zero, &cfg()).unwrap();
    for (p, want) in curve.points.iter().zip([1.0, 2.0, 4.0]) {
        assert!((p.gamma.unwrap() - c(0.0, want)).norm() < 1e-9 * want);
    }
}

#[test]
fn cube_root_trace_point() {
    let p = trace_point(1e-3, Driving::CubeRoot, &cfg()).unwrap();
    let g = p.gamma.unwrap();
    assert!(g.im > 0.0);
    assert!(p.residual.unwrap() <= 1e-6, "{p:?}");
    assert!(!p.flagged);
    let single = trace_curve(&[1e-3], Driving::CubeRoot, &cfg()).unwrap();
    assert_eq!(single.points[0].gamma, Some(g));
}

#[test]
fn cube_root_trace_shrinks_to_origin() {
    let grid = [1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3];
    let trace = trace_curve(&grid, Driving::CubeRoot, &SolverConfig { trace_check: false, ..cfg() }).unwrap();
    let mods: Vec<f64> = trace.points.iter().map(|p| p.gamma.unwrap().norm()).collect();
    assert!(mods.windows(2).all(|w| w[0] < w[1]), "{mods:?}");
    assert!(mods[0] < 0.01 && mods[0] < mods[5] / 10.0);
    assert!(trace.points.iter().all(|p| p.gamma.unwrap().im >= 0.0));
}

#[test]
fn trace_preconditions() {
    assert!(trace_point(0.5, Driving::CubeRoot, &cfg()).unwrap_err().is_precondition());
    assert!(trace_point(0.0, Driving::Zero, &cfg()).unwrap_err().is_precondition());
    assert!(trace_curve(&[1e-3, 1e-4], Driving::CubeRoot, &cfg()).unwrap_err().is_precondition());
}

#[test]
fn gap_diagnostics() {
    let left = min_gap(-0.1, 0.01, &cfg()).unwrap();
    assert_eq!(left.index, 0);
    assert_eq!(left.gap, 0.1);
    let right = min_gap(0.1, 0.01, &cfg()).unwrap();
    assert!(right.gap > 0.0 && right.gap < 0.1);
    assert!(min_gap(0.0, 0.01, &cfg()).unwrap_err().is_precondition());
}

#[test]
fn concatenation_is_consistent() {
    let tol = cfg().rtol;
    let r = concatenation_check(c(0.0, 2.0), 1e-3, 1e-2, &cfg()).unwrap();
    assert!(r <= 10.0 * tol, "{r}");
    let r = concatenation_check(c(0.0, 5.0), 5e-3, 1e-2, &cfg()).unwrap();
    assert!(r <= 10.0 * tol, "{r}");
    let near = concatenation_check(c(0.0, 2.0), 1e-2 * (1.0 - 1e-9), 1e-2, &cfg()).unwrap();
    assert!(near <= r.max(1e-12) * 10.0);
    assert!(concatenation_check(c(0.0, 2.0), 1e-2, 1e-3, &cfg()).unwrap_err().is_precondition());
}
