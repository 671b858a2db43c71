use num_complex::Complex64;
use thiserror::Error;

/// Errors raised across the library.
///
/// The variants are grouped so that a driver can map them onto distinct
/// exit statuses: invalid input, physical domain violations, provider
/// capability mismatches and numerical failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("capability error: {0}")]
    Capability(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("parse error at line {line}, field `{field}`: {reason}")]
    Parse {
        line: usize,
        field: String,
        reason: String,
    },

    #[error(
        "no convergence after {iterations} iterations (last iterate {last}, |f| = {residual:e})"
    )]
    NonConvergence {
        last: Complex64,
        iterations: usize,
        residual: f64,
    },

    #[error("function nearly vanishes on the contour at {at} (|f| = {modulus:e})")]
    BoundaryContact { at: Complex64, modulus: f64 },

    #[error("measurement failed: {0}")]
    Measurement(String),

    #[error("at V/b = {v_over_b}: {source}")]
    AtSpeed { v_over_b: f64, source: Box<Error> },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// The innermost error, with any speed context removed.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::AtSpeed { source, .. } => source.root_cause(),
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
