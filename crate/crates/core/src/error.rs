use thiserror::Error;

/// Errors raised by the model, bound and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("variance must be strictly positive (got {0})")]
    NonPositiveVariance(f64),
    #[error("correlation magnitude 1 is degenerate for every implemented scheme")]
    DegenerateCorrelation,
    #[error("invalid correlation coefficient {0}")]
    InvalidCorrelation(f64),
    #[error("channel parameter {name} must be strictly positive (got {value})")]
    InvalidChannel { name: &'static str, value: f64 },
    #[error("time-sharing requires a common noise variance ({0} vs {1})")]
    MismatchedNoise(f64, f64),
    #[error("argument out of domain: {0}")]
    OutOfDomain(String),
    #[error("uncoded scheme needs a nonzero input combination")]
    ZeroInput,
    #[error("iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("superposition covariance matrix is singular (rates below minimum)")]
    SingularK,
    #[error("superposition gain alpha_{index} = {alpha} outside [0, {max}]")]
    InfeasibleAlpha { index: usize, alpha: f64, max: f64 },
    #[error("fixed-point function has no sign change on the search interval")]
    NoSignChange,
    #[error("no feasible point found in the search grid")]
    EmptyFeasible,
    #[error("codebook budget exceeded: {bits} bits requested, limit {limit}")]
    BudgetExceeded { bits: u64, limit: u64 },
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
