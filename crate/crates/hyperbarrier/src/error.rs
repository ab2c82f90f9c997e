use std::io;

use hyperbarrier_core::Error as CoreError;

/// Failures surfaced by the command-line front end, each with its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// A rejected input; the message names the field.
    #[error("{0}")]
    Validation(String),
    /// Quadrature or simulation failed to converge.
    #[error("{0}")]
    Numerical(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    /// 2 for input validation, 3 for numerical failure, 1 for IO.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

/// The configuration key that feeds a kernel input.
fn config_key(field: &str) -> &str {
    match field {
        "h1" => "h",
        "v" => "e2v",
        "n_paths" => "paths",
        "n_steps" => "steps",
        "rel_tol" => "rel-tol",
        "abs_tol" => "abs-tol",
        "endpoint_inset" => "endpoint-inset",
        "max_subdivisions" => "max-subdivisions",
        "stages" | "breakpoints" => "switch",
        other => other,
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidInput { field, reason } => {
                CliError::Validation(format!("invalid `{}`: {reason}", config_key(field)))
            }
            CoreError::NonConvergence { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
