use thiserror::Error;

/// Errors raised by generators, solvers and estimators.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter violates an operation's precondition.
    #[error("invalid argument `{arg}`: {reason}")]
    InvalidArgument { arg: &'static str, reason: String },

    #[error("coupling matrix is not stationary: spectral radius {radius} exceeds {limit}")]
    NonStationary { radius: f64, limit: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("{what} is not symmetric positive-definite")]
    NotPositiveDefinite { what: &'static str },

    #[error("{what} is singular")]
    Singular { what: &'static str },

    /// Transfer entropy below the numerical-zero floor.
    #[error("transfer entropy {value} is negative beyond the numerical floor")]
    NegativeTransferEntropy { value: f64 },

    #[error("trace series diverges: spectral radius of `{block}` minus identity is {radius}")]
    SeriesDivergence { block: &'static str, radius: f64 },

    #[error("rewiring gave up after {retries} retries for target {target}; configuration too dense")]
    DegenerateRewiring { target: usize, retries: usize },

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("malformed input at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(arg: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            arg,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad inputs rather than runtime/numerical failures.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument { .. }
                | Error::NonStationary { .. }
                | Error::Parse { .. }
                | Error::DegenerateRewiring { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
