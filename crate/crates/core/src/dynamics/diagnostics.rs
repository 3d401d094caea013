use num_complex::Complex64;

use crate::error::{Error, Result};

use super::{solve_forward, Driving, SolverConfig};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapReport {
    /// `min |f(ε, t) - t^{1/3}|` over the samples, the start `t = 0` included.
    pub gap: f64,
    pub argmin: f64,
    /// Index of the minimizing sample (0 is the start).
    pub index: usize,
    pub samples: usize,
}

/// Smallest distance between the real point `ε` and the driving function along its
/// flow on `(0, t_end]`.
pub fn min_gap(eps: f64, t_end: f64, cfg: &SolverConfig) -> Result<GapReport> {
    if eps == 0.0 || !eps.is_finite() {
        return Err(Error::precondition("min_gap needs a real start point eps != 0"));
    }
    let traj = solve_forward(Complex64::new(eps, 0.0), 0.0, t_end, Driving::CubeRoot, cfg)?;
    let (index, best) = traj
        .samples
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.offset.norm().total_cmp(&b.1.offset.norm()))
        .expect("trajectory has samples");
    Ok(GapReport { gap: best.offset.norm(), argmin: best.t, index, samples: traj.samples.len() })
}

/// `|f(z, t) - h_1(f(z, t0), t - t0)|`, where `h_1` runs with the shifted driving
/// `(t_1 + t0)^{1/3}`: the flow restarted at `t0` must reproduce the one-stage flow.
pub fn concatenation_check(z: Complex64, t0: f64, t: f64, cfg: &SolverConfig) -> Result<f64> {
    if !(t0 > 0.0 && t > t0) {
        return Err(Error::precondition(format!("need 0 < t0 < t, got t0 = {t0}, t = {t}")));
    }
    let direct = solve_forward(z, 0.0, t, Driving::CubeRoot, cfg)?.final_value();
    let w = solve_forward(z, 0.0, t0, Driving::CubeRoot, cfg)?.final_value();
    let restarted = solve_forward(w, 0.0, t - t0, Driving::shifted(t0)?, cfg)?.final_value();
    Ok((direct - restarted).norm())
}
