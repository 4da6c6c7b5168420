use thiserror::Error;

/// Errors raised by the analysis library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("{func} did not converge within {iterations} iterations")]
    NoConvergence {
        func: &'static str,
        iterations: usize,
    },

    #[error("quadrature tolerance not reached: estimate {estimate:e}, error bound {abs_error:e}")]
    Quadrature { estimate: f64, abs_error: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unsupported combination: {0}")]
    Contract(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("sweep point {axis} = {value}: {source}")]
    SweepPoint {
        axis: String,
        value: f64,
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
