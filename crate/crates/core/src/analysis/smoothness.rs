use num_complex::Complex64;

use crate::dynamics::{trace_point, Driving, SolverConfig, TracePoint};
use crate::error::{Error, Result};
use crate::sweep;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TurningAngle {
    /// Time of the shared vertex of the two chords.
    pub t: f64,
    /// `|arg(chord_{k+1} / chord_k)|` in radians.
    pub angle: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmoothnessReport {
    pub points: Vec<TracePoint>,
    pub angles: Vec<TurningAngle>,
    pub max_angle: f64,
    /// Largest forward-check residual, when the checks ran.
    pub max_residual: Option<f64>,
}

fn report(points: Vec<TracePoint>) -> SmoothnessReport {
    let gammas: Vec<Complex64> = points.iter().map(|p| p.gamma.expect("only successful points reach here")).collect();
    let chords: Vec<Complex64> = gammas.windows(2).map(|w| w[1] - w[0]).collect();
    let angles: Vec<TurningAngle> = chords
        .windows(2)
        .zip(&points[1..])
        .map(|(c, p)| TurningAngle { t: p.t, angle: (c[1] / c[0]).arg().abs() })
        .collect();
    let max_angle = angles.iter().map(|a| a.angle).fold(0.0, f64::max);
    let max_residual = points.iter().map(|p| p.residual).try_fold(0.0f64, |m, r| r.map(|r| m.max(r)));
    SmoothnessReport { points, angles, max_angle, max_residual }
}

fn traced(grid: &[f64], driving: Driving, cfg: &SolverConfig) -> Result<Vec<TracePoint>> {
    if grid.len() < 2 {
        return Err(Error::precondition("smoothness needs at least two grid points"));
    }
    if !(grid[0] > 0.0) {
        return Err(Error::precondition("smoothness grid must stay away from t = 0"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::precondition("smoothness grid must be strictly increasing"));
    }
    sweep::map(grid, |&t| trace_point(t, driving, cfg)).into_iter().collect()
}

/// Turning angles between consecutive chords of the sampled trace.
pub fn trace_smoothness(grid: &[f64], driving: Driving, cfg: &SolverConfig) -> Result<SmoothnessReport> {
    Ok(report(traced(grid, driving, cfg)?))
}

/// `n + 1` points `lo·(hi/lo)^{k/n}`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=n).map(|k| lo * (hi / lo).powf(k as f64 / n as f64)).collect();
    grid[n] = hi;
    grid
}

#[derive(Clone, Debug, PartialEq)]
pub struct Refinement {
    /// `(segments, report)` per level, coarsest first.
    pub levels: Vec<(usize, SmoothnessReport)>,
}

impl Refinement {
    /// `max_angle(n) / max_angle(2n)` between consecutive levels.
    pub fn ratios(&self) -> Vec<f64> {
        self.levels.windows(2).map(|w| w[0].1.max_angle / w[1].1.max_angle).collect()
    }
}

/// Geometric grids on `[lo, hi]` with `n, 2n, 4n, ...` segments. The trace is solved
/// once on the finest grid and subsampled for the coarser ones.
pub fn smoothness_refinement(
    lo: f64,
    hi: f64,
    segments: &[usize],
    driving: Driving,
    cfg: &SolverConfig,
) -> Result<Refinement> {
    if segments.is_empty() || segments.windows(2).any(|w| w[1] != 2 * w[0]) || segments[0] < 2 {
        return Err(Error::precondition("refinement levels must double, starting from >= 2 segments"));
    }
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::precondition(format!("need 0 < lo < hi, got [{lo}, {hi}]")));
    }
    let finest = *segments.last().expect("non-empty");
    let points = traced(&geometric_grid(lo, hi, finest), driving, cfg)?;
    let levels = segments
        .iter()
        .map(|&n| {
            let stride = finest / n;
            (n, report(points.iter().step_by(stride).cloned().collect()))
        })
        .collect();
    Ok(Refinement { levels })
}
