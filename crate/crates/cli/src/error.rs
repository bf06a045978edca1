use std::fmt;

use dzeta_core::{Error, ErrorClass};

/// Process exit codes.
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub class: ErrorClass,
    pub path: Option<String>,
    pub message: String,
}

impl CliError {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError {
            class: ErrorClass::Validation,
            path: Some(path.into()),
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        CliError {
            class: ErrorClass::Validation,
            path: None,
            message: message.into(),
        }
    }

    pub fn core_at(path: impl Into<String>, e: Error) -> Self {
        CliError {
            path: Some(path.into()),
            ..e.into()
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.class {
            ErrorClass::Resource => EXIT_RESOURCE,
            ErrorClass::Validation => EXIT_VALIDATION,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            class: e.class(),
            path: None,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.class {
            ErrorClass::Resource => "resource limit",
            ErrorClass::Validation => "invalid input",
        };
        match &self.path {
            Some(p) => write!(f, "{kind} at {p}: {}", self.message),
            None => write!(f, "{kind}: {}", self.message),
        }
    }
}
