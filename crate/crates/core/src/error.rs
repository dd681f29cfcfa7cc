use thiserror::Error;

/// Errors produced by the model, the integrator and the analysis tools.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("degenerate case: {0}")]
    DegenerateCase(&'static str),
    #[error("step budget of {max_steps} exhausted at t = {t}")]
    StepBudgetExhausted { max_steps: usize, t: f64 },
    #[error("step size underflow (h = {h:e}) at t = {t}; possible stiffness or chattering near {state:?}")]
    StepUnderflow { t: f64, h: f64, state: Vec<f64> },
    #[error("insufficient boundary points: found {found}, need at least {required}")]
    InsufficientBoundaryPoints { found: usize, required: usize },
    #[error("nominal configuration is not bistable (regime: {0})")]
    NotBistable(String),
    #[error("invalid analysis setup: {0}")]
    InvalidSpec(String),
    #[error("config parse error: {0}")]
    ConfigParse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
