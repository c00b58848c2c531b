use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why an ideal was found not to be 𝔪-primary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotPrimary {
    /// The colength of `J + 𝔪^N` kept growing up to the truncation cap.
    CapExceeded { cap: usize },
    /// No generator has a pure power of this variable, so the ideal lies in
    /// the prime ideal of that coordinate axis.
    MissingPurePower { var: String },
}

impl fmt::Display for NotPrimary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotPrimary::CapExceeded { cap } => write!(f, "colength cap exceeded (N_max = {cap})"),
            NotPrimary::MissingPurePower { var } => {
                write!(f, "no generator has a pure power of {var}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("invalid field specification `{0}` (expected `q` or `fp:<prime>`)")]
    FieldSpec(String),
    #[error("invalid variable list: {0}")]
    Variables(String),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("ideal is not 𝔪-primary: {0}")]
    NotPrimary(NotPrimary),
    #[error("generator `{0}` has a nonzero constant term")]
    NotInMaximalIdeal(String),
    #[error("an ideal needs at least one generator")]
    EmptyIdeal,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("search space of {size} candidates exceeds the cap of {cap}")]
    SearchSpace { size: u128, cap: u128 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("malformed input: {0}")]
    Input(String),
}

impl Error {
    /// Errors caused by malformed user input, as opposed to engine limits.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownVariable { .. }
                | Error::FieldSpec(_)
                | Error::Variables(_)
                | Error::Dimension(_)
                | Error::NotInMaximalIdeal(_)
                | Error::EmptyIdeal
                | Error::DivisionByZero
                | Error::Constraint(_)
                | Error::Unsupported(_)
                | Error::Input(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Input(e.to_string())
    }
}
