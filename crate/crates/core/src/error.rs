use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Caller violated an operation's precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// `|f - λ|` dropped below the configured minimum gap.
    #[error("singular approach at t = {t:e}: |f - λ| = {gap:e} (f = {state})")]
    SingularApproach { t: f64, gap: f64, state: Complex64 },

    #[error("step size underflow at x = {x:e} (h = {h:e})")]
    StepSizeUnderflow { x: f64, h: f64 },

    #[error("step budget of {steps} exhausted at x = {x:e}")]
    TooManySteps { x: f64, steps: usize },

    #[error("{branch} branch left its side of the driving function at t = {t:e}")]
    BranchViolation { branch: &'static str, t: f64 },

    #[error("branch seed rejected: relative residual {residual:e} exceeds {tol:e}")]
    SeedValidation { residual: f64, tol: f64 },

    #[error("degenerate Pade system for (m, k) = ({m}, {k}); try a different order")]
    DegeneratePade { m: usize, k: usize },

    #[error("continuation has a pole on the integration ray at {pole:e}")]
    PoleOnRay { pole: f64 },

    #[error("quadrature did not converge: achieved error {achieved:e}, wanted {wanted:e}")]
    QuadratureNonconvergent { achieved: f64, wanted: f64 },

    #[error("optimizer could not bracket a maximum; scanned profile {profile:?}")]
    OptimizationBracket { profile: Vec<(f64, f64)> },

    #[error("root-test tail did not settle: {diagnostic:?}")]
    NonconvergentTail { diagnostic: Vec<f64> },

    #[error("backward flow failed at s = {s:e}: {reason}")]
    BackwardStep { s: f64, reason: String },
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for contract violations by the caller, false for numerical failures.
    pub fn is_precondition(&self) -> bool {
        matches!(self, Error::Precondition(_))
    }
}
