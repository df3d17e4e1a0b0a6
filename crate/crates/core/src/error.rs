use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero polynomial")]
    DivisionByZero,

    #[error("not expandable at t = 0")]
    NotExpandable,

    #[error("unexpected variable `{0}`")]
    UnexpectedVariable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid presentation: {0}")]
    Presentation(String),

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("enumeration budget exceeded: {what} needs {needed} > budget {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: String,
        budget: u64,
    },

    #[error("no closed form available: {0}")]
    NoClosedForm(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
