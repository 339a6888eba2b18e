use thiserror::Error;

/// Invalid experiment or command configuration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("invalid value for `{field}`: {message}")]
    Invalid { field: String, message: String },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("config parse error at line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Io(String),
}

impl ConfigError {
    pub fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }
}

/// Failure of a count-based estimator.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EstimateError {
    #[error("zero denominator in {0}")]
    ZeroDenominator(&'static str),
    #[error("single-detector efficiency is zero")]
    ZeroSingleEfficiency,
    /// Witness numerator is zero; `fallback` is the limiting error `σ_X/(2μ_Y)`.
    #[error("witness mean is zero (fallback error {fallback})")]
    ZeroMean { fallback: f64 },
    #[error("a standard-basis count is zero")]
    ZeroCount,
}
