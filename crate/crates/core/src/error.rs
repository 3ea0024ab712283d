use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension limit exceeded: side length {side} > maximum {max}")]
    DimensionLimit { side: usize, max: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("subsystem index {index} out of range for {count} subsystems")]
    Index { index: usize, count: usize },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("numeric failure in {what} (residual {residual:e})")]
    Numeric { what: String, residual: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("parameter `{name}` = {value} outside [0, 1]")]
    ParameterRange { name: String, value: f64 },
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
