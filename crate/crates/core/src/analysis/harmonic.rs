use std::f64::consts::PI;

use crate::dynamics::solve_singular;
use crate::error::{Error, Result};
use crate::series::BranchSign;
use crate::sweep;
use crate::tail::linear_fit;

use super::AnalysisConfig;

/// Harmonic measures at `i` of the two sides of the slit at time `t`, reduced to the
/// boundary angles of the singular endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmonicMeasures {
    pub t: f64,
    pub f1: f64,
    pub f2: f64,
    /// `arctan f1 - arctan ∛t`
    pub alpha1: f64,
    /// `arctan ∛t - arctan f2`
    pub alpha2: f64,
    pub m1: f64,
    pub m2: f64,
    /// `m1 / m2²`, which tends to `6π`.
    pub ratio: f64,
}

impl HarmonicMeasures {
    /// `|ratio/(6π) - 1|`
    pub fn deviation(&self) -> f64 {
        (self.ratio / (6.0 * PI) - 1.0).abs()
    }
}

pub fn harmonic_measures(t: f64, cfg: &AnalysisConfig) -> Result<HarmonicMeasures> {
    cfg.validate()?;
    cfg.check_time(t)?;
    let plus = solve_singular(BranchSign::Plus, None, t, &cfg.solver)?;
    let minus = solve_singular(BranchSign::Minus, None, t, &cfg.solver)?;
    let (p, m) = (plus.last(), minus.last());
    let tau = t.cbrt();
    // arctan differences through the offsets, so the small angles keep their digits
    let alpha1 = (p.offset.re / (1.0 + p.f.re * tau)).atan();
    let alpha2 = (-m.offset.re / (1.0 + m.f.re * tau)).atan();
    let (m1, m2) = (alpha1 / PI, alpha2 / PI);
    Ok(HarmonicMeasures { t, f1: p.f.re, f2: m.f.re, alpha1, alpha2, m1, m2, ratio: m1 / (m2 * m2) })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioRow {
    pub t: f64,
    pub measures: Option<HarmonicMeasures>,
    pub error: Option<String>,
}

impl RatioRow {
    pub fn deviation(&self) -> Option<f64> {
        self.measures.map(|m| m.deviation())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioScan {
    pub rows: Vec<RatioRow>,
    /// Least-squares `C` in `deviation ≈ C·t^{1/3}`.
    pub c_fit: Option<f64>,
    /// Slope of `ln deviation` against `ln t`.
    pub slope: Option<f64>,
}

impl RatioScan {
    /// Deviations decrease strictly along the (decreasing) grid.
    pub fn shrinking(&self) -> bool {
        let devs: Vec<Option<f64>> = self.rows.iter().map(RatioRow::deviation).collect();
        devs.windows(2).all(|w| matches!((w[0], w[1]), (Some(a), Some(b)) if b < a))
    }
}

/// [`harmonic_measures`] over a strictly decreasing grid; failed points are kept as
/// rows with an error message and excluded from the fits.
pub fn ratio_scan(grid: &[f64], cfg: &AnalysisConfig) -> Result<RatioScan> {
    cfg.validate()?;
    if grid.is_empty() {
        return Err(Error::precondition("ratio_scan needs a non-empty grid"));
    }
    if grid.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::precondition("ratio_scan grid must be strictly decreasing"));
    }
    for &t in grid {
        cfg.check_time(t)?;
    }
    let rows = sweep::map(grid, |&t| match harmonic_measures(t, cfg) {
        Ok(m) => RatioRow { t, measures: Some(m), error: None },
        Err(e) => RatioRow { t, measures: None, error: Some(e.to_string()) },
    });
    let good: Vec<(f64, f64)> =
        rows.iter().filter_map(|r| r.deviation().filter(|d| *d > 0.0).map(|d| (r.t, d))).collect();
    let c_fit = if good.is_empty() {
        None
    } else {
        let num: f64 = good.iter().map(|(t, d)| d * t.cbrt()).sum();
        let den: f64 = good.iter().map(|(t, _)| t.cbrt().powi(2)).sum();
        Some(num / den)
    };
    let xs: Vec<f64> = good.iter().map(|(t, _)| t.ln()).collect();
    let ys: Vec<f64> = good.iter().map(|(_, d)| d.ln()).collect();
    let slope = linear_fit(&xs, &ys).map(|(_, b)| b);
    Ok(RatioScan { rows, c_fit, slope })
}
