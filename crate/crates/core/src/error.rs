use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("integrand evaluated to a non-finite value at x = {x}")]
    Evaluation { x: f64 },

    #[error("quadrature did not converge: best estimate {estimate} with error {error}")]
    Convergence { estimate: f64, error: f64 },

    #[error("integrand has no decay hint; refusing to truncate the real line")]
    UnsupportedDecay,

    #[error("variation did not settle, unbounded variation suspected (last estimates {previous}, {last})")]
    UnboundedVariation { previous: f64, last: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown catalog key `{0}`")]
    UnknownKey(String),

    #[error("t = {t} is outside the existence horizon t < {horizon}")]
    OutOfHorizon { t: f64, horizon: f64 },

    #[error("weighted integral diverges: {0}")]
    Divergence(String),

    #[error("could not isolate the {found} of {expected} roots of H_{expected}")]
    RootIsolation { expected: usize, found: usize },

    #[error("sample data rejected: {0}")]
    Samples(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("value outside the validity domain: {0}")]
    OutOfValidity(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Samples(e.to_string())
    }
}
