use std::fmt;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Evaluation requested exactly at a pole of the function.
    Pole { context: &'static str },
    /// Input outside the domain or the validated envelope of a routine.
    Domain { context: &'static str, detail: String },
    /// An iterative scheme exhausted its budget before reaching the target.
    Convergence {
        context: &'static str,
        achieved: f64,
        target: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Pole { context } => write!(f, "evaluation at a pole in {context}"),
            Error::Domain { context, detail } => {
                write!(f, "argument outside supported domain in {context}: {detail}")
            }
            Error::Convergence {
                context,
                achieved,
                target,
            } => write!(
                f,
                "{context} did not converge: reached {achieved:.3e}, target {target:.3e}"
            ),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(context: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            context,
            detail: detail.into(),
        }
    }
}
