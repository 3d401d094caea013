//! Dormand–Prince 5(4) with elementary step control on a single complex state.
//!
//! Integration may run in either direction. The `on_step` hook sees every accepted
//! point and can abort the run (gap checks, sampling).

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeConfig {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Initial step; chosen automatically when `None`.
    pub h0: Option<f64>,
    /// Upper bound on `|h|`; unbounded when `None`.
    pub h_max: Option<f64>,
}

impl Default for OdeConfig {
    fn default() -> Self {
        OdeConfig { rtol: 1e-10, atol: 1e-12, max_steps: 200_000, h0: None, h_max: None }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OdeStats {
    pub steps: usize,
    pub rejected: usize,
    pub min_step: f64,
}

impl OdeStats {
    pub fn merge(&mut self, other: &OdeStats) {
        self.steps += other.steps;
        self.rejected += other.rejected;
        self.min_step = match (self.min_step, other.min_step) {
            (0.0, b) => b,
            (a, 0.0) => a,
            (a, b) => a.min(b),
        };
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn initial_step(f0: Complex64, y0: Complex64, span: f64, cfg: &OdeConfig) -> f64 {
    let sc = cfg.atol + cfg.rtol * y0.norm();
    let d0 = y0.norm() / sc;
    let d1 = f0.norm() / sc;
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 * span } else { 0.01 * d0 / d1 };
    h.min(0.1 * span).max(1e-12 * span)
}

/// Integrates `y' = f(x, y)` from `(x0, y0)` to `x_end`; returns `y(x_end)`.
pub fn integrate<F, C>(f: F, x0: f64, y0: Complex64, x_end: f64, cfg: &OdeConfig, mut on_step: C) -> Result<(Complex64, OdeStats)>
where
    F: Fn(f64, Complex64) -> Complex64,
    C: FnMut(f64, Complex64) -> Result<()>,
{
    let mut stats = OdeStats::default();
    let span = (x_end - x0).abs();
    if span == 0.0 {
        return Ok((y0, stats));
    }
    let dir = (x_end - x0).signum();
    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, y);
    if !finite(k1) {
        return Err(Error::StepSizeUnderflow { x, h: 0.0 });
    }
    let h_cap = cfg.h_max.unwrap_or(f64::INFINITY).min(span);
    let mut h = cfg.h0.unwrap_or_else(|| initial_step(k1, y, span, cfg)).min(h_cap);
    loop {
        if stats.steps + stats.rejected >= cfg.max_steps {
            return Err(Error::TooManySteps { x, steps: cfg.max_steps });
        }
        let remaining = (x_end - x).abs();
        let last = h >= remaining * (1.0 - 1e-12);
        if last {
            h = remaining;
        }
        if h <= 8.0 * f64::EPSILON * x.abs().max(span * 1e-300) {
            return Err(Error::StepSizeUnderflow { x, h });
        }
        let s = dir * h;
        let k2 = f(x + C2 * s, y + s * (A21 * k1));
        let k3 = f(x + C3 * s, y + s * (A31 * k1 + A32 * k2));
        let k4 = f(x + C4 * s, y + s * (A41 * k1 + A42 * k2 + A43 * k3));
        let k5 = f(x + C5 * s, y + s * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
        let k6 = f(x + s, y + s * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
        let y_new = y + s * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        let x_new = if last { x_end } else { x + s };
        let k7 = f(x_new, y_new);
        let err_vec = s * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
        let scale = cfg.atol + cfg.rtol * y.norm().max(y_new.norm());
        let err = err_vec.norm() / scale;
        if !(err.is_finite() && finite(y_new) && finite(k7)) {
            stats.rejected += 1;
            h *= 0.25;
            continue;
        }
        if err <= 1.0 {
            stats.steps += 1;
            stats.min_step = if stats.min_step == 0.0 { h } else { stats.min_step.min(h) };
            x = x_new;
            y = y_new;
            k1 = k7;
            on_step(x, y)?;
            if last {
                return Ok((y, stats));
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = (h * fac).min(h_cap);
        } else {
            stats.rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
    }
}
