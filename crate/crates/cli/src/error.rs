use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{source_name}:{line}: {msg}")]
    ConfigLine {
        source_name: String,
        line: usize,
        msg: String,
    },
    #[error("invalid value for `{key}`: {msg}")]
    Field { key: String, msg: String },
    #[error(transparent)]
    Core(#[from] gaussmac::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0} verification check(s) failed")]
    VerificationFailed(usize),
}

impl CliError {
    /// Process exit code: 1 usage or config, 2 budget, 3 verification.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(gaussmac::Error::BudgetExceeded { .. }) => 2,
            CliError::VerificationFailed(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
