//! Checks built on the series and flow engines: harmonic-measure
//! asymptotics, the ordering of singular and branch solutions, trace smoothness under
//! refinement, and convergence radii of the holomorphic solutions.

mod harmonic;
mod monotone;
mod radius;
mod smoothness;

use crate::dynamics::SolverConfig;
use crate::error::{Error, Result};

pub use harmonic::{harmonic_measures, ratio_scan, HarmonicMeasures, RatioRow, RatioScan};
pub use monotone::{
    default_lattice, monotonicity_lattice, monotonicity_report, ChainLink, LinkStatus, MonotonicityReport, CHAIN_LABELS,
};
pub use radius::{
    majorant_lower_bound, majorant_profile, radius_ratio_test, radius_root_test, MajorantBound, RadiusEstimate,
    RadiusMethod,
};
pub use smoothness::{geometric_grid, smoothness_refinement, trace_smoothness, Refinement, SmoothnessReport, TurningAngle};

/// Solver settings plus the "small enough `t`" window of the analysis checks.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisConfig {
    pub solver: SolverConfig,
    /// Largest time used by the analysis checks.
    pub t_max: f64,
    /// Strict inequalities need margins above `margin_factor` times the solver tolerance.
    pub margin_factor: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig { solver: SolverConfig::default(), t_max: 1e-2, margin_factor: 10.0 }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        self.solver.validate()?;
        if !(self.t_max > 0.0 && self.t_max <= self.solver.t_max) {
            return Err(Error::precondition(format!(
                "analysis t_max must lie in (0, {}], got {}",
                self.solver.t_max, self.t_max
            )));
        }
        if !(self.margin_factor >= 1.0) {
            return Err(Error::precondition("margin_factor must be >= 1"));
        }
        Ok(())
    }

    pub(crate) fn check_time(&self, t: f64) -> Result<()> {
        if !(t > 0.0 && t <= self.t_max) {
            return Err(Error::precondition(format!("time {t} outside (0, t_max = {}]", self.t_max)));
        }
        Ok(())
    }
}
