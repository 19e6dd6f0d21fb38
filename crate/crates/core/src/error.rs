use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("trajectory overflowed at t = {t} (|phi| or |psi| exceeded {limit:e})")]
    NumericOverflow { t: f64, limit: f64 },

    #[error("no sign change of the boundary mismatch after {steps} bracket expansions (last probe lambda = {last})")]
    BracketFailure { steps: usize, last: f64 },

    #[error("bisection stalled on [{lo}, {hi}] after {iterations} iterations")]
    ToleranceFailure { lo: f64, hi: f64, iterations: usize },

    #[error("descent did not converge within {iterations} iterations (best quotient {best})")]
    NonConvergence { iterations: usize, best: f64 },

    #[error("unsupported problem: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
