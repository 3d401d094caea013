//! Adaptive solvers for the chordal Loewner flow `df/dt = 2/(f - λ(t))`.
//!
//! Every solver integrates the offset `d = f - λ(t)` rather than `f` itself: the
//! interesting solutions hug the driving function, and the offset keeps their
//! relative precision. Near `t = 0` the cube-root driving is handled in the variable
//! `τ = t^{1/3}`, where the flow reads `dd/dτ = 6τ²/d - 1`.

mod diagnostics;
mod singular;
mod trace;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ode::{integrate, OdeConfig, OdeStats};
use crate::series::BranchSign;

pub use diagnostics::{concatenation_check, min_gap, GapReport};
pub use singular::{auto_seed_time, solve_branch, solve_singular};
pub use trace::{tip_residual, trace_curve, trace_point, Trace, TracePoint};

/// Driving functions supported by the solvers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Driving {
    /// `λ(t) = t^{1/3}`
    CubeRoot,
    /// `λ ≡ 0`
    Zero,
    /// `λ(t) = (t + t0)^{1/3}`, analytic at `t = 0`.
    ShiftedCubeRoot { t0: f64 },
}

impl Driving {
    pub fn shifted(t0: f64) -> Result<Driving> {
        if !(t0 > 0.0 && t0.is_finite()) {
            return Err(Error::precondition(format!("shift t0 must be positive, got {t0}")));
        }
        Ok(Driving::ShiftedCubeRoot { t0 })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Driving::CubeRoot => "cube_root",
            Driving::Zero => "zero",
            Driving::ShiftedCubeRoot { .. } => "shifted_cube_root",
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Driving::CubeRoot => t.cbrt(),
            Driving::Zero => 0.0,
            Driving::ShiftedCubeRoot { t0 } => (t + t0).cbrt(),
        }
    }

    /// `λ'(t)`; `None` where it does not exist (the cube root at 0).
    pub fn derivative(&self, t: f64) -> Option<f64> {
        match *self {
            Driving::CubeRoot if t <= 0.0 => None,
            Driving::CubeRoot => Some(1.0 / (3.0 * t.cbrt().powi(2))),
            Driving::Zero => Some(0.0),
            Driving::ShiftedCubeRoot { t0 } => Some(1.0 / (3.0 * (t + t0).cbrt().powi(2))),
        }
    }

    /// `λ(t) - λ(t - s)` without cancellation, for `0 <= s <= t`.
    pub fn drop(&self, t: f64, s: f64) -> f64 {
        let cube = |base: f64| -base.cbrt() * ((-s / base).ln_1p() / 3.0).exp_m1();
        match *self {
            Driving::CubeRoot if s >= t => t.cbrt(),
            Driving::CubeRoot => cube(t),
            Driving::Zero => 0.0,
            Driving::ShiftedCubeRoot { t0 } => cube(t + t0),
        }
    }
}

/// Solver settings shared by every flow, trace and analysis routine.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub rtol: f64,
    pub atol: f64,
    /// Abort when `|f - λ|` drops below this.
    pub min_gap: f64,
    /// Below `τ = tau_switch` the cube-root flow runs in the `τ` variable.
    pub tau_switch: f64,
    /// Largest time accepted by the cube-root trace and branch solvers.
    pub t_max: f64,
    /// Number of series terms used to seed singular and branch solutions.
    pub n_seed: usize,
    /// Branch seed offset; `max(1e-8, 1e-4·t0)` when `None`.
    pub branch_delta: Option<f64>,
    /// Largest accepted relative ODE residual of a branch seed.
    pub seed_tol: f64,
    pub max_steps: usize,
    /// Tolerances of the backward trace flow and its forward check.
    pub trace_rtol: f64,
    pub trace_atol: f64,
    /// Flag trace points whose tip residual exceeds this.
    pub trace_residual_tol: f64,
    /// Compute the forward tip residual for every trace point.
    pub trace_check: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            rtol: 1e-10,
            atol: 1e-12,
            min_gap: 1e-12,
            tau_switch: 1e-2,
            t_max: 1e-1,
            n_seed: 4,
            branch_delta: None,
            seed_tol: 1e-4,
            max_steps: 2_000_000,
            trace_rtol: 1e-13,
            trace_atol: 1e-16,
            trace_residual_tol: 1e-6,
            trace_check: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rtol", self.rtol),
            ("atol", self.atol),
            ("tau_switch", self.tau_switch),
            ("t_max", self.t_max),
            ("seed_tol", self.seed_tol),
            ("trace_rtol", self.trace_rtol),
            ("trace_atol", self.trace_atol),
            ("trace_residual_tol", self.trace_residual_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::precondition(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.min_gap >= 0.0) {
            return Err(Error::precondition("min_gap must be >= 0"));
        }
        if self.n_seed < 3 {
            return Err(Error::precondition(format!("n_seed must be >= 3, got {}", self.n_seed)));
        }
        if let Some(d) = self.branch_delta {
            if !(d > 0.0) {
                return Err(Error::precondition("branch_delta must be positive"));
            }
        }
        Ok(())
    }

    pub fn branch_delta_for(&self, t0: f64) -> f64 {
        self.branch_delta.unwrap_or_else(|| (1e-4 * t0).max(1e-8))
    }

    pub(crate) fn ode(&self) -> OdeConfig {
        OdeConfig { rtol: self.rtol, atol: self.atol, max_steps: self.max_steps, h0: None, h_max: None }
    }

    pub(crate) fn trace_ode(&self) -> OdeConfig {
        OdeConfig { rtol: self.trace_rtol, atol: self.trace_atol, ..self.ode() }
    }

    /// Same settings with tolerances scaled by `factor` (refinement studies).
    pub fn tightened(&self, factor: f64) -> SolverConfig {
        SolverConfig { rtol: self.rtol * factor, atol: self.atol * factor, ..self.clone() }
    }
}

/// How a trajectory was started.
#[derive(Clone, Debug, PartialEq)]
pub enum Seed {
    Point(Complex64),
    Singular { sign: BranchSign, t_seed: f64, n_seed: usize },
    BranchPoint { t0: f64, sign: BranchSign, delta: f64, seed_residual: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub f: Complex64,
    /// `f - λ(t)`, carried at full relative precision.
    pub offset: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowTrajectory {
    pub seed: Seed,
    pub driving: Driving,
    pub samples: Vec<Sample>,
    pub stats: OdeStats,
}

impl FlowTrajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectories hold at least their seed")
    }

    pub fn final_value(&self) -> Complex64 {
        self.last().f
    }
}

/// Integrates the offset from `t_start` to `t_end`, recording every accepted step.
/// `check(t, d)` runs on each accepted point.
#[allow(clippy::too_many_arguments)]
pub(crate) fn flow_offset(
    driving: Driving,
    d0: Complex64,
    t_start: f64,
    t_end: f64,
    ode: &OdeConfig,
    tau_switch: f64,
    check: &mut dyn FnMut(f64, Complex64) -> Result<()>,
    samples: &mut Vec<Sample>,
) -> Result<(Complex64, OdeStats)> {
    let mut stats = OdeStats::default();
    let mut d = d0;
    let mut t = t_start;
    let record = |t: f64, d: Complex64, samples: &mut Vec<Sample>| {
        samples.push(Sample { t, f: d + driving.eval(t), offset: d });
    };
    record(t, d, samples);
    let t_switch = tau_switch.powi(3);
    if driving == Driving::CubeRoot && t < t_switch {
        let tau_end = t_end.cbrt().min(tau_switch);
        let (d_tau, s) = integrate(
            |tau, d| 6.0 * tau * tau / d - 1.0,
            t.cbrt(),
            d,
            tau_end,
            ode,
            |tau, d| {
                let tt = tau * tau * tau;
                check(tt, d)?;
                record(tt, d, samples);
                Ok(())
            },
        )?;
        stats.merge(&s);
        d = d_tau;
        t = if tau_end == tau_switch { t_switch } else { t_end };
        if let Some(last) = samples.last_mut() {
            last.t = t;
            last.f = d + driving.eval(t);
        }
    }
    if t < t_end {
        let (d_t, s) = integrate(
            |tt, d| 2.0 / d - driving.derivative(tt).unwrap_or(f64::INFINITY),
            t,
            d,
            t_end,
            ode,
            |tt, d| {
                check(tt, d)?;
                record(tt, d, samples);
                Ok(())
            },
        )?;
        stats.merge(&s);
        d = d_t;
    }
    Ok((d, stats))
}

pub(crate) fn gap_check(driving: Driving, min_gap: f64) -> impl FnMut(f64, Complex64) -> Result<()> {
    move |t, d| {
        if d.norm() < min_gap || !d.norm().is_finite() {
            return Err(Error::SingularApproach { t, gap: d.norm(), state: d + driving.eval(t) });
        }
        Ok(())
    }
}

/// The gap closes like `2√(t* - t)`, so the step size underflows long before `min_gap`
/// is reached; a collapse that ends with a small gap is reported as a singular approach.
fn collapse_as_approach(e: Error, samples: &[Sample], scale: f64) -> Error {
    match (&e, samples.last()) {
        (Error::StepSizeUnderflow { .. }, Some(last)) if last.offset.norm() <= 1e-6 * scale.max(1.0) => {
            Error::SingularApproach { t: last.t, gap: last.offset.norm(), state: last.f }
        }
        _ => e,
    }
}

/// Regular solution `f(z, ·)` of the flow from `(z, t_start)` to `t_end`.
pub fn solve_forward(z: Complex64, t_start: f64, t_end: f64, driving: Driving, cfg: &SolverConfig) -> Result<FlowTrajectory> {
    cfg.validate()?;
    if !(t_start >= 0.0 && t_end > t_start && t_end.is_finite()) {
        return Err(Error::precondition(format!("need 0 <= t_start < t_end, got [{t_start}, {t_end}]")));
    }
    if !(z.re.is_finite() && z.im.is_finite()) || z.im < 0.0 {
        return Err(Error::precondition(format!("start point must lie in the closed upper half-plane, got {z}")));
    }
    let d0 = z - driving.eval(t_start);
    let mut check = gap_check(driving, cfg.min_gap);
    check(t_start, d0)?;
    let mut samples = Vec::new();
    let (_, stats) = flow_offset(driving, d0, t_start, t_end, &cfg.ode(), cfg.tau_switch, &mut check, &mut samples)
        .map_err(|e| collapse_as_approach(e, &samples, d0.norm()))?;
    Ok(FlowTrajectory { seed: Seed::Point(z), driving, samples, stats })
}

#[cfg(test)]
mod tests;
