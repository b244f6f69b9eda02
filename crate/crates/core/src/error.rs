use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates its validity constraint.
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// An argument lies outside the domain of the function.
    #[error("{function}: argument {value} outside domain {domain}")]
    Domain {
        function: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// Input data is unusable (empty, negative, ties everywhere, ...).
    #[error("invalid data: {0}")]
    Data(String),

    /// An iterative method failed or produced a non-finite value.
    #[error("numerical failure in {context}: {detail}")]
    Numerical { context: &'static str, detail: String },

    /// The Hessian at the reported optimum is numerically rank-deficient.
    #[error("singular Hessian (condition estimate {0:e})")]
    SingularHessian(f64),
}

impl Error {
    pub(crate) fn domain(function: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            function,
            value,
            domain,
        }
    }

    pub(crate) fn numerical(context: &'static str, detail: impl Into<String>) -> Self {
        Error::Numerical {
            context,
            detail: detail.into(),
        }
    }

    /// True for errors caused by caller input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. } | Error::Domain { .. } | Error::Data(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
