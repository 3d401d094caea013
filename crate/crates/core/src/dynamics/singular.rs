use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::parse_rational;
use crate::poly::horner;
use crate::series::{branch_half_coeffs, singular_minus_coeffs, singular_plus_coeffs, BranchSign, ExactSeries};

use super::{flow_offset, gap_check, Driving, FlowTrajectory, Seed, SolverConfig};

fn singular_series(sign: BranchSign, n: usize) -> ExactSeries {
    match sign {
        BranchSign::Plus => singular_plus_coeffs(n),
        BranchSign::Minus => singular_minus_coeffs(n),
    }
}

fn branch_name(sign: BranchSign) -> &'static str {
    match sign {
        BranchSign::Plus => "plus",
        BranchSign::Minus => "minus",
    }
}

/// Seed time for the singular families: the first omitted term `|a_{n+1}| τ^{n+1}`
/// stays below `1e-12`, and the seed sits a decade below the `τ` switch.
pub fn auto_seed_time(sign: BranchSign, cfg: &SolverConfig) -> f64 {
    let n = cfg.n_seed;
    let series = singular_series(sign, n + 1);
    let next = series.coeff_f64(n + 1).abs();
    let tau = (1e-12 / next).powf(1.0 / (n + 1) as f64).min(0.1 * cfg.tau_switch);
    tau.powi(3)
}

fn side_check(
    sign: BranchSign,
    driving: Driving,
    min_gap: f64,
) -> impl FnMut(f64, Complex64) -> Result<()> {
    let mut gap = gap_check(driving, min_gap);
    move |t, d| {
        let wrong = match sign {
            BranchSign::Plus => d.re <= 0.0,
            BranchSign::Minus => d.re >= 0.0,
        };
        if wrong {
            return Err(Error::BranchViolation { branch: branch_name(sign), t });
        }
        gap(t, d)
    }
}

/// Singular solution `f_1(0, ·)` (plus) or `f_2(0, ·)` (minus), seeded at `t_seed`
/// from the truncated asymptotic series in `τ = t^{1/3}`.
///
/// `t_seed = None` picks [`auto_seed_time`].
pub fn solve_singular(sign: BranchSign, t_seed: Option<f64>, t_end: f64, cfg: &SolverConfig) -> Result<FlowTrajectory> {
    cfg.validate()?;
    let t_seed = t_seed.unwrap_or_else(|| auto_seed_time(sign, cfg).min(1e-3 * t_end));
    if !(t_seed > 0.0 && t_end > t_seed && t_end.is_finite()) {
        return Err(Error::precondition(format!("need 0 < t_seed < t_end, got t_seed = {t_seed}, t_end = {t_end}")));
    }
    let series = singular_series(sign, cfg.n_seed);
    // offset d = g - τ = Σ a_n τ^n - τ
    let mut c: Vec<f64> = std::iter::once(0.0).chain((1..=cfg.n_seed).map(|n| series.coeff_f64(n))).collect();
    c[1] -= 1.0;
    let tau = t_seed.cbrt();
    let d0 = Complex64::new(horner(&c, tau), 0.0);
    let driving = Driving::CubeRoot;
    let mut check = side_check(sign, driving, cfg.min_gap);
    check(t_seed, d0)?;
    let mut samples = Vec::new();
    let (_, stats) = flow_offset(driving, d0, t_seed, t_end, &cfg.ode(), cfg.tau_switch, &mut check, &mut samples)?;
    Ok(FlowTrajectory {
        seed: Seed::Singular { sign, t_seed, n_seed: cfg.n_seed },
        driving,
        samples,
        stats,
    })
}

/// Shortest decimal form of `x` as an exact rational (`1e-3` becomes `1/1000`).
fn decimal_rational(x: f64) -> Result<crate::exact::Rational> {
    parse_rational(&format!("{x:e}"))
}

/// Branch solution `f_1(z_0, ·)` or `f_2(z_0, ·)` through the critical point
/// `(t0^{1/3}, t0)`, seeded at `t0 + δ` from the half-power series.
pub fn solve_branch(t0: f64, sign: BranchSign, t_end: f64, cfg: &SolverConfig) -> Result<FlowTrajectory> {
    cfg.validate()?;
    if !(t0 > 0.0 && t_end > t0 && t_end <= cfg.t_max) {
        return Err(Error::precondition(format!(
            "need 0 < t0 < t_end <= t_max = {}, got t0 = {t0}, t_end = {t_end}",
            cfg.t_max
        )));
    }
    let delta = cfg.branch_delta_for(t0);
    if t0 + delta >= t_end {
        return Err(Error::precondition(format!("seed time t0 + delta = {} is not before t_end", t0 + delta)));
    }
    let exact_t0 = decimal_rational(t0)?;
    let series = branch_half_coeffs(&exact_t0, cfg.n_seed, sign)?;
    let field = series.field();
    let b: Vec<f64> = (1..=cfg.n_seed).map(|n| series.coeff_f64(n)).collect();
    let s0 = field.to_f64(series.offset());
    let u = delta.sqrt();
    let with_zero: Vec<f64> = std::iter::once(0.0).chain(b.iter().copied()).collect();
    let t_seed = t0 + delta;
    let f = s0 + horner(&with_zero, u);
    let d0 = f - t_seed.cbrt();
    // df/dt = Σ (n/2) b_n u^{n-2}, compared with the flow's right-hand side
    let df: f64 = b.iter().enumerate().map(|(i, bn)| 0.5 * (i + 1) as f64 * bn * u.powi(i as i32 - 1)).sum();
    let rhs = 2.0 / d0;
    let seed_residual = ((df - rhs) / rhs).abs();
    if !(seed_residual <= cfg.seed_tol) {
        return Err(Error::SeedValidation { residual: seed_residual, tol: cfg.seed_tol });
    }
    let driving = Driving::CubeRoot;
    let d0 = Complex64::new(d0, 0.0);
    let mut check = side_check(sign, driving, cfg.min_gap);
    check(t_seed, d0)?;
    let mut samples = Vec::new();
    let (_, stats) = flow_offset(driving, d0, t_seed, t_end, &cfg.ode(), cfg.tau_switch, &mut check, &mut samples)?;
    Ok(FlowTrajectory {
        seed: Seed::BranchPoint { t0, sign, delta, seed_residual },
        driving,
        samples,
        stats,
    })
}
