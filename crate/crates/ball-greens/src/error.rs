use std::fmt;

/// Errors raised by the evaluators and the verification machinery.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input validation failure (dimension mismatch, out-of-range argument, ...).
    InvalidArgument(String),
    /// Evaluation point coincides with the source position.
    SourceCoincidence,
    /// Dipole placed at the center of the ball; the image point is undefined.
    CenteredDipole,
    /// An odd-order kernel integral was requested at x = 0, where the
    /// direction x/|x| it depends on is undefined.
    DirectionUndefined,
    /// Adaptive quadrature exhausted its subdivision budget.
    NonConvergence { estimate: f64, error: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::SourceCoincidence => {
                write!(f, "evaluation point coincides with the source position")
            }
            Error::CenteredDipole => {
                write!(f, "dipole at the center of the ball has no image point")
            }
            Error::DirectionUndefined => {
                write!(f, "integral requires a direction but x = 0")
            }
            Error::NonConvergence { estimate, error } => write!(
                f,
                "quadrature did not converge (estimate {estimate:e}, error bound {error:e})"
            ),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
