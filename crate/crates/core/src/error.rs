use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("capacity exceeded: {what} = {got} exceeds limit {limit}")]
    Capacity {
        what: &'static str,
        got: u128,
        limit: u128,
    },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("quadrature budget exceeded after {subdivisions} subdivisions (error {error:e}, target {target:e})")]
    BudgetExceeded {
        subdivisions: usize,
        error: f64,
        target: f64,
    },

    #[error("variance mismatch: gaussian has {gaussian}, spectrum has {spectrum}")]
    VarianceMismatch { gaussian: f64, spectrum: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable tag, used in the CLI's error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidSet(_) => "invalid_set",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Capacity { .. } => "capacity",
            Error::Overflow(_) => "overflow",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::VarianceMismatch { .. } => "variance_mismatch",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
        }
    }
}

pub(crate) fn check_capacity(what: &'static str, got: u128, limit: u128) -> Result<()> {
    if got > limit {
        Err(Error::Capacity { what, got, limit })
    } else {
        Ok(())
    }
}
