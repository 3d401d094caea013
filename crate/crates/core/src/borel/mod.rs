//! Borel summation of the singular series `Σ a_n τ^n`.
//!
//! The transform `G(ζ) = Σ a_n ζ^n / n!` has a finite radius, so the Laplace integral
//! `h(τ) = ∫_0^∞ e^{-x} G(τx) dx` runs on a Padé continuation of `G`.

mod pade;

use crate::error::{Error, Result};
use crate::exact::{factorial, ln_abs, Rational};
use crate::poly::horner;
use crate::quad::{integrate, QuadConfig};
use crate::series::{BasisStep, ExactSeries, Family};
use crate::tail::{default_window, windowed_root};

pub use pade::{pade_continuation, RationalApproximant};

/// `a_n / n!` for `n = 1..n_max`, with a root-test radius estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct BorelTransform {
    family: Family,
    coeffs: Vec<Rational>,
    radius_estimate: f64,
}

impl BorelTransform {
    pub fn family(&self) -> Family {
        self.family
    }

    /// `coeffs()[n-1] = a_n / n!`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn radius_estimate(&self) -> f64 {
        self.radius_estimate
    }

    /// Direct partial sum `Σ_{n<=n_terms} c_n z^n`, valid inside the disk of convergence.
    pub fn partial_sum(&self, z: f64, n_terms: usize) -> f64 {
        let c: Vec<f64> = std::iter::once(0.0)
            .chain(self.coeffs.iter().take(n_terms).map(crate::exact::to_f64))
            .collect();
        horner(&c, z)
    }
}

/// Divides the singular coefficients by `n!` and estimates the radius by a windowed
/// root test at the end of the tail.
pub fn borel_transform(series: &ExactSeries) -> Result<BorelTransform> {
    if series.step() != BasisStep::Whole {
        return Err(Error::precondition("Borel transform needs an integer-power series"));
    }
    if !matches!(series.family(), Family::SingularPlus | Family::SingularMinus) {
        return Err(Error::precondition(format!(
            "Borel transform is defined for the singular families, not {}",
            series.family().name()
        )));
    }
    let coeffs: Vec<Rational> = series
        .rational_coeffs()
        .expect("singular coefficients are rational")
        .into_iter()
        .enumerate()
        .map(|(i, a)| a / Rational::from_integer(factorial(i as u64 + 1)))
        .collect();
    let n = coeffs.len();
    let ln: Vec<f64> = coeffs.iter().map(ln_abs).collect();
    let root = windowed_root(&ln, n, default_window(n));
    if !root.is_finite() || n < 2 {
        return Err(Error::precondition("radius estimate needs at least two nonzero coefficients"));
    }
    Ok(BorelTransform { family: series.family(), coeffs, radius_estimate: (-root).exp() })
}

/// Continuation ladder and quadrature settings.
#[derive(Clone, Debug, PartialEq)]
pub struct BorelConfig {
    /// Tried in order; the first usable order gives the value and the next one the
    /// continuation error.
    pub ladder: Vec<(usize, usize)>,
    pub quad: QuadConfig,
    /// Laplace cutoff: `e^{-x}|G̃(τx)| < cutoff · max integrand`.
    pub cutoff: f64,
}

impl Default for BorelConfig {
    fn default() -> Self {
        BorelConfig {
            ladder: vec![(8, 8), (6, 6), (10, 10)],
            quad: QuadConfig::default(),
            cutoff: 1e-16,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BorelValue {
    pub value: f64,
    /// Quadrature plus continuation error.
    pub error: f64,
    pub quad_error: f64,
    pub continuation_error: f64,
    pub order: (usize, usize),
    pub x_max: f64,
}

const X_SCAN_LIMIT: f64 = 800.0;

/// Truncation point of `∫_0^∞ e^{-x} φ(x) dx`, found by scanning outward; fails when a
/// pole of the continuation sits on the ray before the integrand has decayed.
fn laplace_cutoff(phi: &dyn Fn(f64) -> f64, pole_x: Option<f64>, cutoff: f64) -> Result<f64> {
    let mut peak = 0.0f64;
    let mut x = 0.0;
    let dx = 0.25;
    while x <= X_SCAN_LIMIT {
        if let Some(p) = pole_x {
            if x + dx >= p {
                return Err(Error::PoleOnRay { pole: p });
            }
        }
        let v = ((-x).exp() * phi(x)).abs();
        peak = peak.max(v);
        if x > 1.0 && peak > 0.0 && v < cutoff * peak {
            return Ok(x);
        }
        if peak == 0.0 && x > 50.0 {
            return Ok(x);
        }
        x += dx;
    }
    Ok(X_SCAN_LIMIT)
}

struct Piece {
    value: f64,
    quad_error: f64,
    x_max: f64,
    order: (usize, usize),
}

fn ladder_value(
    transform: &BorelTransform,
    cfg: &BorelConfig,
    one: &dyn Fn(&RationalApproximant) -> Result<Piece>,
) -> Result<BorelValue> {
    let mut pieces = Vec::new();
    let mut last_err = None;
    for &(m, k) in &cfg.ladder {
        let piece = pade_continuation(transform, m, k).and_then(|r| one(&r));
        match piece {
            Ok(p) => pieces.push(p),
            Err(e) if e.is_precondition() => return Err(e),
            Err(e) => last_err = Some(e),
        }
        if pieces.len() == 2 {
            break;
        }
    }
    match pieces.as_slice() {
        [] => Err(last_err.unwrap_or_else(|| Error::precondition("empty continuation ladder"))),
        [p] => Ok(BorelValue {
            value: p.value,
            error: p.quad_error,
            quad_error: p.quad_error,
            continuation_error: 0.0,
            order: p.order,
            x_max: p.x_max,
        }),
        [p, q, ..] => {
            let continuation_error = (p.value - q.value).abs();
            Ok(BorelValue {
                value: p.value,
                error: p.quad_error + continuation_error,
                quad_error: p.quad_error,
                continuation_error,
                order: p.order,
                x_max: p.x_max,
            })
        }
    }
}

fn pole_on_ray(r: &RationalApproximant, tau: f64) -> Option<f64> {
    r.positive_real_poles().first().map(|p| p / tau)
}

/// `h(τ) = ∫_0^{x_max} e^{-x} G̃(τx) dx` with a quadrature and continuation error.
pub fn borel_sum(tau: f64, transform: &BorelTransform, cfg: &BorelConfig) -> Result<BorelValue> {
    borel_remainder(tau, transform, 0, cfg)
}

/// `h(τ) - Σ_{k<=n} a_k τ^k`, integrating `ζ^{n+1} S(ζ)/Q(ζ)` with
/// `P - T_n Q = ζ^{n+1} S` formed exactly, so no cancellation occurs at small `τ`.
pub fn borel_remainder(tau: f64, transform: &BorelTransform, n: usize, cfg: &BorelConfig) -> Result<BorelValue> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::precondition(format!("tau must be finite and >= 0, got {tau}")));
    }
    if tau == 0.0 {
        let order = cfg.ladder.first().copied().unwrap_or((0, 0));
        return Ok(BorelValue { value: 0.0, error: 0.0, quad_error: 0.0, continuation_error: 0.0, order, x_max: 0.0 });
    }
    let scale = tau.powi(n as i32 + 1);
    let one = |r: &RationalApproximant| -> Result<Piece> {
        let s: Vec<f64> = r.remainder_numerator(transform.coeffs(), n)?.iter().map(crate::exact::to_f64).collect();
        let phi = |x: f64| x.powi(n as i32 + 1) * horner(&s, tau * x) / r.eval_denominator(tau * x);
        let x_max = laplace_cutoff(&phi, pole_on_ray(r, tau), cfg.cutoff)?;
        // the scaled-out integral is O(|a_{n+1}|), so the tolerance is effectively relative
        let q = integrate(|x| (-x).exp() * phi(x), 0.0, x_max, &cfg.quad)?;
        Ok(Piece { value: scale * q.value, quad_error: scale * q.error, x_max, order: r.order() })
    };
    ladder_value(transform, cfg, &one)
}

/// Partial sum `Σ_{k<=n} a_k τ^k` of the underlying divergent series.
pub fn truncated_series(transform: &BorelTransform, tau: f64, n: usize) -> f64 {
    let a: Vec<f64> = std::iter::once(0.0)
        .chain(
            transform
                .coeffs
                .iter()
                .take(n)
                .enumerate()
                .map(|(i, c)| crate::exact::to_f64(&(c * Rational::from_integer(factorial(i as u64 + 1))))),
        )
        .collect();
    horner(&a, tau)
}

#[cfg(test)]
mod tests;
