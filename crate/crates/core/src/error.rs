use alloc::string::String;

/// Errors raised by the pricing kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input violated a documented precondition. `field` names the
    /// offending input.
    #[error("invalid `{field}`: {reason}")]
    InvalidInput { field: &'static str, reason: String },

    /// Adaptive quadrature ran out of subdivisions before meeting its
    /// tolerance. The partial value and its error estimate are kept.
    #[error("quadrature did not converge: value {value:e}, error estimate {error_estimate:e}")]
    NonConvergence { value: f64, error_estimate: f64 },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidInput { field, reason: reason.into() }
    }

    /// True for numerical failures, false for rejected inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }

    /// Name of the rejected input, if any.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            Error::InvalidInput { field, .. } => Some(field),
            Error::NonConvergence { .. } => None,
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

/// Rejects non-finite values and anything failing `ok`.
pub(crate) fn ensure(field: &'static str, value: f64, ok: bool, requirement: &'static str) -> Result<()> {
    if value.is_finite() && ok {
        Ok(())
    } else {
        Err(Error::invalid(field, alloc::format!("{value} does not satisfy {requirement}")))
    }
}
