use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{ln_abs, to_f64, Rational};
use crate::series::holomorphic_coeffs;
use crate::tail::{default_window, linear_fit, root_sequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadiusMethod {
    RootTest,
    RatioTest,
    CauchyMajorant,
}

impl RadiusMethod {
    pub fn name(self) -> &'static str {
        match self {
            RadiusMethod::RootTest => "root_test",
            RadiusMethod::RatioTest => "ratio_test",
            RadiusMethod::CauchyMajorant => "cauchy_majorant",
        }
    }
}

/// Radius of convergence in the `τ = ∛t` variable; the `t` radius is `value³`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiusEstimate {
    pub eps: f64,
    pub method: RadiusMethod,
    pub value: f64,
    pub n_used: usize,
    pub error_bar: f64,
}

impl RadiusEstimate {
    pub fn t_radius(&self) -> f64 {
        self.value.powi(3)
    }
}

fn holomorphic_tail(eps: &Rational, n_max: usize) -> Result<Vec<Rational>> {
    if n_max < 50 {
        return Err(Error::precondition(format!("radius estimates need n_max >= 50, got {n_max}")));
    }
    let series = holomorphic_coeffs(eps, n_max)?;
    Ok(series.rational_coeffs().expect("holomorphic coefficients are rational"))
}

/// Root test on the coefficients `a_n(ε)`: windowed `ln|a_n|/n` over the last half of
/// the tail, extrapolated linearly in `1/n`. The error bar is the size of the
/// extrapolation correction.
pub fn radius_root_test(eps: &Rational, n_max: usize) -> Result<RadiusEstimate> {
    let a = holomorphic_tail(eps, n_max)?;
    let ln: Vec<f64> = a.iter().map(ln_abs).collect();
    let seq: Vec<(usize, f64)> =
        root_sequence(&ln, default_window(n_max)).into_iter().filter(|(n, _)| 2 * n >= n_max).collect();
    let ys: Vec<f64> = seq.iter().map(|p| p.1).collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return Err(Error::NonconvergentTail { diagnostic: ys });
    }
    let xs: Vec<f64> = seq.iter().map(|p| 1.0 / p.0 as f64).collect();
    let (limit, _) = linear_fit(&xs, &ys).ok_or_else(|| Error::NonconvergentTail { diagnostic: ys.clone() })?;
    let value = (-limit).exp();
    let raw = (-ys[ys.len() - 1]).exp();
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::NonconvergentTail { diagnostic: ys });
    }
    Ok(RadiusEstimate {
        eps: to_f64(eps),
        method: RadiusMethod::RootTest,
        value,
        n_used: n_max,
        error_bar: (value - raw).abs(),
    })
}

/// Mercer–Roberts ratio test:
/// `B_n² = (a_{n+1}a_{n-1} - a_n²)/(a_n a_{n-2} - a_{n-1}²)` tends to `1/R²` and also
/// handles a complex-conjugate pair of nearest singularities. `B_n` is extrapolated
/// linearly in `1/n` over the last half of the tail.
pub fn radius_ratio_test(eps: &Rational, n_max: usize) -> Result<RadiusEstimate> {
    let a = holomorphic_tail(eps, n_max)?;
    let c = |n: usize| &a[n - 1];
    let mut pts = Vec::new();
    for n in (n_max / 2).max(3)..n_max {
        let num = c(n + 1) * c(n - 1) - c(n) * c(n);
        let den = c(n) * c(n - 2) - c(n - 1) * c(n - 1);
        if den.is_zero() {
            continue;
        }
        let b2 = to_f64(&(num / den));
        if b2 > 0.0 && b2.is_finite() {
            pts.push((n, b2.sqrt()));
        }
    }
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    if pts.len() < 4 {
        return Err(Error::NonconvergentTail { diagnostic: ys });
    }
    let xs: Vec<f64> = pts.iter().map(|p| 1.0 / p.0 as f64).collect();
    let (limit, _) = linear_fit(&xs, &ys).ok_or_else(|| Error::NonconvergentTail { diagnostic: ys.clone() })?;
    if !(limit > 0.0 && limit.is_finite()) {
        return Err(Error::NonconvergentTail { diagnostic: ys });
    }
    let value = 1.0 / limit;
    Ok(RadiusEstimate {
        eps: to_f64(eps),
        method: RadiusMethod::RatioTest,
        value,
        n_used: n_max,
        error_bar: (value - 1.0 / ys[ys.len() - 1]).abs(),
    })
}

/// Majorant lower bound `R₂(ε) = max_{0<r₁<ε} R₁(r₁)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MajorantBound {
    pub estimate: RadiusEstimate,
    /// Maximizing `r₁`.
    pub r1: f64,
    /// `c(ε) = r₁/ε`
    pub c: f64,
    /// Bound `M = 12r₁²/(ε - r₁)` on the right-hand side over the polydisk.
    pub m: f64,
}

impl MajorantBound {
    /// `(1 - c)²/ε`, which grows without bound as `ε → 0`.
    pub fn gap_ratio(&self) -> f64 {
        (1.0 - self.c).powi(2) / self.estimate.eps
    }
}

/// `R₁(r₁) = r₁(1 - exp(-(ε - r₁)²/(48 r₁³)))`.
pub fn majorant_profile(eps: f64, r1: f64) -> f64 {
    r1 * -(-(eps - r1).powi(2) / (48.0 * r1.powi(3))).exp_m1()
}

const GRID: usize = 1000;

/// Grid scan over `c = r₁/ε ∈ (0, 1)` to bracket the maximum, then golden-section.
pub fn majorant_lower_bound(eps: f64) -> Result<MajorantBound> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::precondition(format!("majorant bound needs eps > 0, got {eps}")));
    }
    let g = |c: f64| majorant_profile(eps, c * eps);
    let profile: Vec<(f64, f64)> = (1..GRID).map(|i| i as f64 / GRID as f64).map(|c| (c, g(c))).collect();
    let best = (0..profile.len()).max_by(|&i, &j| profile[i].1.total_cmp(&profile[j].1)).expect("grid is non-empty");
    if best == 0 || best + 1 == profile.len() || !(profile[best].1 > 0.0) {
        return Err(Error::OptimizationBracket { profile });
    }
    let (mut lo, mut hi) = (profile[best - 1].0, profile[best + 1].0);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    while hi - lo > 1e-13 {
        if g1 < g2 {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + phi * (hi - lo);
            g2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - phi * (hi - lo);
            g1 = g(x1);
        }
    }
    let c = 0.5 * (lo + hi);
    let r1 = c * eps;
    Ok(MajorantBound {
        estimate: RadiusEstimate {
            eps,
            method: RadiusMethod::CauchyMajorant,
            value: g(c),
            n_used: 0,
            error_bar: (hi - lo) * eps,
        },
        r1,
        c,
        m: 12.0 * r1 * r1 / (eps - r1),
    })
}
