use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to parse model document: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("invalid model: {0}")]
    Validation(String),

    #[error("domain error evaluating {kind} at n = {n}: {reason}")]
    Domain {
        kind: &'static str,
        n: f64,
        reason: String,
    },

    #[error("Fock index {n} outside truncation n_max = {n_max}")]
    OutOfRange { n: usize, n_max: usize },

    #[error(
        "truncation at n_max = {n_max} discards norm {tail_mass:.3e} (limit {limit:.1e}); \
         raise n_max"
    )]
    Truncation {
        n_max: usize,
        tail_mass: f64,
        limit: f64,
    },

    #[error(
        "population {population:.3e} reached the top {guard} Fock levels at t = {time} \
         (limit {limit:.1e}); raise n_max above {n_max}"
    )]
    Leak {
        n_max: usize,
        guard: usize,
        time: f64,
        population: f64,
        limit: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("eigensolver failed to converge after {iterations} iterations")]
    Convergence { iterations: usize },

    #[error("eigenpair residual {residual:e} exceeds {limit:e}")]
    EigenResidual { residual: f64, limit: f64 },

    #[error("integrator norm drifted by {drift:e} at t = {time}")]
    Integration { time: f64, drift: f64 },

    #[error("unknown model '{0}'")]
    UnknownModel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
