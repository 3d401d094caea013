use crate::dynamics::{solve_branch, solve_singular, SolverConfig};
use crate::error::{Error, Result};
use crate::series::BranchSign;
use crate::sweep;

use super::AnalysisConfig;

/// The seven values of the ordering chain, smallest first.
pub const CHAIN_LABELS: [&str; 7] = ["f2(0,t)", "f2(z1,t)", "f2(z0,t)", "cbrt(t)", "f1(z0,t)", "f1(z1,t)", "f1(0,t)"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkStatus {
    /// Margin above both the required multiple of the tolerance and the numerical noise.
    Strict,
    /// Margin within the numerical noise.
    Tie,
    /// Wrong order beyond the numerical noise.
    Violation,
    /// Right order but below the required multiple of the tolerance.
    Thin,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainLink {
    pub lower: &'static str,
    pub upper: &'static str,
    pub lower_value: f64,
    pub upper_value: f64,
    pub margin: f64,
    /// `margin_factor · (rtol·max|v| + atol)`
    pub required: f64,
    /// Change of the two values under a 100× tighter solve, plus one tolerance.
    pub noise: f64,
    pub status: LinkStatus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityReport {
    pub t1: f64,
    pub t0: f64,
    pub t: f64,
    pub values: [f64; 7],
    pub links: Vec<ChainLink>,
}

impl MonotonicityReport {
    pub fn holds(&self) -> bool {
        self.links.iter().all(|l| l.status == LinkStatus::Strict)
    }

    pub fn min_margin_ratio(&self) -> f64 {
        self.links.iter().map(|l| l.margin / l.required).fold(f64::INFINITY, f64::min)
    }
}

fn chain(t1: f64, t0: f64, t: f64, cfg: &SolverConfig) -> Result<[f64; 7]> {
    let end = |traj: crate::dynamics::FlowTrajectory| traj.final_value().re;
    Ok([
        end(solve_singular(BranchSign::Minus, None, t, cfg)?),
        end(solve_branch(t1, BranchSign::Minus, t, cfg)?),
        end(solve_branch(t0, BranchSign::Minus, t, cfg)?),
        t.cbrt(),
        end(solve_branch(t0, BranchSign::Plus, t, cfg)?),
        end(solve_branch(t1, BranchSign::Plus, t, cfg)?),
        end(solve_singular(BranchSign::Plus, None, t, cfg)?),
    ])
}

/// `f2(0,t) < f2(z1,t) < f2(z0,t) < ∛t < f1(z0,t) < f1(z1,t) < f1(0,t)` for
/// `0 < t1 < t0 < t`, with per-link margins against the solver tolerance.
pub fn monotonicity_report(t1: f64, t0: f64, t: f64, cfg: &AnalysisConfig) -> Result<MonotonicityReport> {
    cfg.validate()?;
    if !(t1 > 0.0 && t1 < t0 && t0 < t) {
        return Err(Error::precondition(format!("need 0 < t1 < t0 < t, got t1 = {t1}, t0 = {t0}, t = {t}")));
    }
    cfg.check_time(t)?;
    let values = chain(t1, t0, t, &cfg.solver)?;
    let fine = chain(t1, t0, t, &cfg.solver.tightened(1e-2))?;
    let (rtol, atol) = (cfg.solver.rtol, cfg.solver.atol);
    let links = (0..6)
        .map(|k| {
            let (a, b) = (values[k], values[k + 1]);
            let tol = rtol * a.abs().max(b.abs()) + atol;
            let required = cfg.margin_factor * tol;
            let noise = (a - fine[k]).abs() + (b - fine[k + 1]).abs() + tol;
            let margin = b - a;
            let status = if margin > required && margin > noise {
                LinkStatus::Strict
            } else if margin < -noise {
                LinkStatus::Violation
            } else if margin.abs() <= noise {
                LinkStatus::Tie
            } else {
                LinkStatus::Thin
            };
            ChainLink {
                lower: CHAIN_LABELS[k],
                upper: CHAIN_LABELS[k + 1],
                lower_value: a,
                upper_value: b,
                margin,
                required,
                noise,
                status,
            }
        })
        .collect();
    Ok(MonotonicityReport { t1, t0, t, values, links })
}

/// The 3×3×3 lattice `t1 ∈ {1e-5, 2e-5, 5e-5}`, `t0 ∈ {1e-4, 2e-4, 5e-4}`,
/// `t ∈ {1e-3, 3e-3, 1e-2}`.
pub fn default_lattice() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(27);
    for t1 in [1e-5, 2e-5, 5e-5] {
        for t0 in [1e-4, 2e-4, 5e-4] {
            for t in [1e-3, 3e-3, 1e-2] {
                out.push((t1, t0, t));
            }
        }
    }
    out
}

/// [`monotonicity_report`] over a lattice of triples, in input order.
pub fn monotonicity_lattice(
    triples: &[(f64, f64, f64)],
    cfg: &AnalysisConfig,
) -> Vec<Result<MonotonicityReport>> {
    sweep::map(triples, |&(t1, t0, t)| monotonicity_report(t1, t0, t, cfg))
}
