//! Slit trace `γ(t) = f^{-1}(λ(t), t)` by the backward (downward) flow
//! `dh/ds = -2/(h - λ(t - s))`, `h(0) = λ(t)`.
//!
//! The start is non-Lipschitz (`h ≈ λ(t) + 2i√s`), so the first half runs in
//! `σ = √s`. For the cube root the end `s → t` sees the infinite slope of `λ` at 0
//! and runs in `r = (t - s)^{1/3}` instead.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ode::{integrate, OdeConfig};
use crate::sweep;

use super::{flow_offset, gap_check, Driving, SolverConfig};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Debug, PartialEq)]
pub struct TracePoint {
    pub t: f64,
    pub gamma: Option<Complex64>,
    /// `|f(γ(t), t) - λ(t)|` from the forward check, when computed.
    pub residual: Option<f64>,
    pub steps: usize,
    /// Residual above tolerance, or the forward check failed.
    pub flagged: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub driving: Driving,
    pub points: Vec<TracePoint>,
}

impl Trace {
    pub fn gammas(&self) -> Vec<Option<Complex64>> {
        self.points.iter().map(|p| p.gamma).collect()
    }

    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.gamma.is_none()).count()
    }
}

fn check_time(t: f64, driving: Driving, cfg: &SolverConfig) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::precondition(format!("trace time must be positive, got {t}")));
    }
    if driving == Driving::CubeRoot && t > cfg.t_max {
        return Err(Error::precondition(format!("trace time {t} exceeds t_max = {}", cfg.t_max)));
    }
    Ok(())
}

/// `dD/dσ = -4σ / (D + λ(t) - λ(t - σ²))` with `D = h - λ(t)`: shared by the backward
/// start and the forward approach to the tip.
fn sigma_flow(driving: Driving, t: f64, d0: Complex64, from: f64, to: f64, ode: &OdeConfig) -> Result<(Complex64, usize)> {
    let (d, stats) = integrate(
        |sigma, d| -4.0 * sigma / (d + driving.drop(t, sigma * sigma)),
        from,
        d0,
        to,
        ode,
        |_, _| Ok(()),
    )?;
    Ok((d, stats.steps + stats.rejected))
}

fn backward(t: f64, driving: Driving, cfg: &SolverConfig) -> Result<(Complex64, usize)> {
    let ode = cfg.trace_ode();
    let lam = driving.eval(t);
    let slope = driving.derivative(t).unwrap_or(0.0);
    let sigma0 = 1e-6 * t.sqrt();
    let d0 = 2.0 * I * sigma0 - slope / 3.0 * sigma0 * sigma0;
    let s_switch = 0.5 * t;
    let wrap = |s: f64| move |e: Error| Error::BackwardStep { s, reason: e.to_string() };
    let (d, n1) = sigma_flow(driving, t, d0, sigma0, s_switch.sqrt(), &ode).map_err(wrap(0.0))?;
    let h = d + lam;
    let (gamma, stats) = match driving {
        Driving::CubeRoot => integrate(|r, h| 6.0 * r * r / (h - r), (t - s_switch).cbrt(), h, 0.0, &ode, |_, _| Ok(())),
        _ => integrate(|s, h| -2.0 / (h - driving.eval(t - s)), s_switch, h, t, &ode, |_, _| Ok(())),
    }
    .map_err(wrap(s_switch))?;
    Ok((gamma, n1 + stats.steps + stats.rejected))
}

/// `|f(γ, t) - λ(t)|`: forward flow from `γ` up to `t/2`, then the `σ = √(t - s)`
/// approach to the tip, stopped at `σ = 1e-9·√t`.
pub fn tip_residual(gamma: Complex64, t: f64, driving: Driving, cfg: &SolverConfig) -> Result<f64> {
    check_time(t, driving, cfg)?;
    let ode = cfg.trace_ode();
    let half = 0.5 * t;
    let mut check = gap_check(driving, cfg.min_gap);
    let mut samples = Vec::new();
    let (d_half, _) = flow_offset(driving, gamma - driving.eval(0.0), 0.0, half, &ode, cfg.tau_switch, &mut check, &mut samples)?;
    // offset from λ(t) instead of λ(t/2)
    let e0 = d_half - driving.drop(t, half);
    let (e, _) = sigma_flow(driving, t, e0, half.sqrt(), 1e-9 * t.sqrt(), &ode)?;
    Ok(e.norm())
}

/// `γ(t)` with diagnostics. Numerical failures of the backward flow are errors;
/// a failed or large forward residual only raises `flagged`.
pub fn trace_point(t: f64, driving: Driving, cfg: &SolverConfig) -> Result<TracePoint> {
    cfg.validate()?;
    check_time(t, driving, cfg)?;
    let (gamma, steps) = backward(t, driving, cfg)?;
    let (residual, flagged) = if cfg.trace_check {
        match tip_residual(gamma, t, driving, cfg) {
            Ok(r) => (Some(r), !(r <= cfg.trace_residual_tol)),
            Err(_) => (None, true),
        }
    } else {
        (None, false)
    };
    Ok(TracePoint { t, gamma: Some(gamma), residual, steps, flagged, error: None })
}

/// [`trace_point`] over an increasing grid. Per-point failures are recorded in the
/// point and do not abort the curve.
pub fn trace_curve(grid: &[f64], driving: Driving, cfg: &SolverConfig) -> Result<Trace> {
    cfg.validate()?;
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::precondition("trace grid must be strictly increasing"));
    }
    for &t in grid {
        check_time(t, driving, cfg)?;
    }
    let points = sweep::map(grid, |&t| {
        trace_point(t, driving, cfg).unwrap_or_else(|e| TracePoint {
            t,
            gamma: None,
            residual: None,
            steps: 0,
            flagged: true,
            error: Some(e.to_string()),
        })
    });
    Ok(Trace { driving, points })
}
