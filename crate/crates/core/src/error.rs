use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the function.
    #[error("{func}: domain error: {msg}")]
    Domain { func: &'static str, msg: String },

    /// The evaluation could not meet its accuracy budget.
    #[error("{func}: accuracy budget missed: {msg}")]
    Accuracy { func: &'static str, msg: String },

    /// Parameters hit a removable singularity of the closed form (integer order differences).
    #[error("{func}: degenerate parameters: {msg}")]
    DegenerateParameter { func: &'static str, msg: String },

    /// The fading model collapses (no independent scatter power); use the Gamma-Gamma path.
    #[error("degenerate model: {0}")]
    DegenerateModel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Root finding could not bracket the requested target.
    #[error("bracket error: {0}")]
    Bracket(String),
}

impl Error {
    pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { func, msg: msg.into() }
    }

    pub(crate) fn accuracy(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Accuracy { func, msg: msg.into() }
    }

    pub(crate) fn degenerate(func: &'static str, msg: impl Into<String>) -> Self {
        Error::DegenerateParameter { func, msg: msg.into() }
    }

    /// True for failures caused by numerical precision rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Accuracy { .. } | Error::Bracket(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
