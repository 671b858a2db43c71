use std::fmt;

use crackwave::Error;

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_CAPABILITY: i32 = 4;
pub const EXIT_NUMERICAL: i32 = 5;

/// A message plus the process exit status it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

pub fn exit_code(err: &Error) -> i32 {
    match err.root_cause() {
        Error::InvalidParameter { .. } | Error::Parse { .. } | Error::Io(_) => EXIT_CONFIG,
        Error::Domain(_) | Error::Range(_) => EXIT_DOMAIN,
        Error::Capability(_) => EXIT_CAPABILITY,
        Error::NonConvergence { .. } | Error::BoundaryContact { .. } | Error::Measurement(_) => {
            EXIT_NUMERICAL
        }
        Error::AtSpeed { .. } => unreachable!("root_cause strips speed context"),
    }
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    pub fn capability(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CAPABILITY,
            message: message.into(),
        }
    }

    /// Library error attributed to a configuration field.
    pub fn at(field: &str, err: Error) -> Self {
        Self {
            code: exit_code(&err),
            message: format!("{field}: {err}"),
        }
    }

    pub fn io(what: &std::path::Path, err: std::io::Error) -> Self {
        Self {
            code: 1,
            message: format!("{}: {err}", what.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Self {
            code: exit_code(&err),
            message: err.to_string(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}
