use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("operator not compatible with this function: {0}")]
    Structural(String),
    #[error("result is not integrable: {0}")]
    Singularity(String),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("the fractional Laplacian reduction degenerates at alpha = 1")]
    DegenerateReduction,
    #[error("{what} is numerically singular (smallest singular value {sigma_min:e})")]
    SingularMatrix { what: String, sigma_min: f64 },
    #[error("unknown problem label `{0}`")]
    UnknownProblem(String),
    #[error("invalid config key `{key}`: {msg}")]
    Config { key: String, msg: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of the numerical pipeline, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::SingularMatrix { .. } | Error::Singularity(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
