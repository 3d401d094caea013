//! Run configuration: a flat `key = value` file (TOML syntax, top-level keys only),
//! overridden by command-line flags.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use loewner::analysis::AnalysisConfig;
use loewner::dynamics::SolverConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Text,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Text => "txt",
        }
    }
}

/// Every parameter of a run. Output locations are not part of it: they do not change
/// what is computed, so moving the output keeps the hash.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub command: String,
    pub format: Format,

    /// Coefficient family: plus, minus, cuberoot, branch-plus, branch-minus, holomorphic.
    pub family: String,
    /// Number of coefficients.
    pub n: usize,
    /// Branch / Taylor anchor and shift of the shifted driving, as an exact rational.
    pub t0: String,
    /// Holomorphic expansion point, as an exact rational.
    pub eps: String,
    /// Coefficients used by the radius estimators.
    pub n_max: usize,
    /// Coefficients fed to the Borel transform.
    pub borel_terms: usize,
    pub tau: Vec<f64>,

    /// Flow seed: point, plus, minus, branch-plus, branch-minus.
    pub seed: String,
    pub z_re: f64,
    pub z_im: f64,
    pub t_start: f64,
    pub t_end: f64,
    /// cube_root, zero, shifted_cube_root.
    pub driving: String,
    /// Smallest branch time of the ordering chain; the default lattice is used when absent.
    pub t1: Option<f64>,

    /// Explicit time grid; empty selects the command's default grid.
    pub grid: Vec<f64>,
    pub grid_lo: f64,
    pub grid_hi: f64,
    /// Segment counts of the refinement study (each doubling the previous).
    pub levels: Vec<usize>,

    pub rtol: f64,
    pub atol: f64,
    pub min_gap: f64,
    pub tau_switch: f64,
    pub solver_t_max: f64,
    pub n_seed: usize,
    pub seed_tol: f64,
    pub branch_delta: Option<f64>,
    pub trace_rtol: f64,
    pub trace_atol: f64,
    pub trace_residual_tol: f64,
    /// Largest time of the analysis checks.
    pub t_max: f64,
    pub margin_factor: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let solver = SolverConfig::default();
        let analysis = AnalysisConfig::default();
        RunConfig {
            command: String::new(),
            format: Format::Csv,
            family: "plus".into(),
            n: 10,
            t0: "1/1000".into(),
            eps: "1".into(),
            n_max: 200,
            borel_terms: 60,
            tau: vec![1e-3, 1e-2],
            seed: "point".into(),
            z_re: 1.0,
            z_im: 1.0,
            t_start: 0.0,
            t_end: 1e-2,
            driving: "cube_root".into(),
            t1: None,
            grid: Vec::new(),
            grid_lo: 1e-4,
            grid_hi: 1e-2,
            levels: vec![16, 32, 64],
            rtol: solver.rtol,
            atol: solver.atol,
            min_gap: solver.min_gap,
            tau_switch: solver.tau_switch,
            solver_t_max: solver.t_max,
            n_seed: solver.n_seed,
            seed_tol: solver.seed_tol,
            branch_delta: solver.branch_delta,
            trace_rtol: solver.trace_rtol,
            trace_atol: solver.trace_atol,
            trace_residual_tol: solver.trace_residual_tol,
            t_max: analysis.t_max,
            margin_factor: analysis.margin_factor,
        }
    }
}

#[derive(Debug)]
pub struct ConfigError {
    pub message: String,
    /// 1-based line and column of the offending text, when known.
    pub position: Option<(usize, usize)>,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.position {
            Some((line, col)) => write!(f, "config error at line {line}, column {col}: {}", self.message),
            None => write!(f, "config error: {}", self.message),
        }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

impl RunConfig {
    pub fn from_text(text: &str) -> Result<RunConfig, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError {
            message: e.message().to_string(),
            position: e.span().map(|s| line_col(text, s.start)),
        })
    }

    pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError { message: format!("{}: {e}", path.display()), position: None })?;
        Self::from_text(&text)
    }

    /// The resolved configuration in the file format, loadable again.
    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("flat configs always serialize")
    }

    /// SHA-256 over the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("configs serialize");
        Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            rtol: self.rtol,
            atol: self.atol,
            min_gap: self.min_gap,
            tau_switch: self.tau_switch,
            t_max: self.solver_t_max,
            n_seed: self.n_seed,
            branch_delta: self.branch_delta,
            seed_tol: self.seed_tol,
            trace_rtol: self.trace_rtol,
            trace_atol: self.trace_atol,
            trace_residual_tol: self.trace_residual_tol,
            ..SolverConfig::default()
        }
    }

    pub fn analysis(&self) -> AnalysisConfig {
        AnalysisConfig { solver: self.solver(), t_max: self.t_max, margin_factor: self.margin_factor }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_only_file() {
        let cfg = RunConfig::from_text("# nothing set\n").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.rtol, 1e-10);
        assert_eq!(cfg.t_max, 1e-2);
    }

    #[test]
    fn unknown_key_is_rejected_with_position() {
        let err = RunConfig::from_text("rtol = 1e-9\ntolarence = 1e-3\n").unwrap_err();
        assert!(err.message.contains("tolarence"), "{err}");
        assert_eq!(err.position.map(|p| p.0), Some(2));
    }

    #[test]
    fn parse_error_has_position() {
        let err = RunConfig::from_text("n = 10\nrtol = = 3\n").unwrap_err();
        assert_eq!(err.position.map(|p| p.0), Some(2));
    }

    #[test]
    fn round_trip_and_hash() {
        let mut cfg = RunConfig { command: "trace".into(), grid: vec![1e-4, 3e-4], t1: Some(2e-5), ..Default::default() };
        cfg.branch_delta = Some(1e-9);
        let back = RunConfig::from_text(&cfg.to_text()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash(), cfg.hash());
        let mut other = cfg.clone();
        other.rtol = 1e-11;
        assert_ne!(other.hash(), cfg.hash());
        other.rtol = cfg.rtol;
        other.levels.push(128);
        assert_ne!(other.hash(), cfg.hash());
    }

    #[test]
    fn floats_round_trip_exactly() {
        let cfg = RunConfig { rtol: 0.1 + 0.2, tau: vec![1.0 / 3.0], ..Default::default() };
        assert_eq!(RunConfig::from_text(&cfg.to_text()).unwrap(), cfg);
    }
}
