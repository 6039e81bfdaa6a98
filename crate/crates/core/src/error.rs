use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error("variable index {var} out of range for {nvars} variables")]
    VarOutOfRange { var: usize, nvars: usize },
    #[error("series is not invertible: constant term is zero")]
    NotInvertible,
    #[error("multi-index of degree {degree} lies beyond truncation degree {trunc_deg}")]
    BeyondTruncation { degree: u32, trunc_deg: u32 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown name `{name}` at position {pos}")]
    UnknownName { name: String, pos: usize },
    #[error("D(...) at position {pos} expects {expected} exponents, found {found}")]
    JetArity { pos: usize, expected: usize, found: usize },
    #[error("truncation exhausted: derivative of order {order} needs degree budget, only {available} left")]
    TruncationExhausted { order: u32, available: u32 },
    #[error("degree budget violated: trunc_deg {trunc_deg} < s*order_t = {required}")]
    Budget { trunc_deg: u32, required: u32 },
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("field is not linear in jets: {0}")]
    NonLinearField(String),
    #[error("cannot fit growth model: {0}")]
    CannotFit(String),
    #[error("requested degree {requested} exceeds valid degree {valid} of t-coefficient {k}")]
    DegreeBeyondValid { requested: u32, valid: u32, k: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("integrand does not decay along the path: {0}")]
    NonDecaying(String),
    #[error("invalid integration path: {0}")]
    InvalidPath(String),
    #[error("quadrature subdivision limit {0} exceeded")]
    SubdivisionLimit(usize),
    #[error("non-finite value produced: {0}")]
    NonFinite(String),
    #[error("{at}: {source}")]
    Located { at: String, source: Box<Error> },
    #[error("json: {0}")]
    Json(String),
}

impl Error {
    /// Numeric failures (quadrature, overflow) as opposed to malformed input.
    pub fn is_numeric(&self) -> bool {
        if let Error::Located { source, .. } = self {
            return source.is_numeric();
        }
        matches!(
            self,
            Error::NonDecaying(_)
                | Error::SubdivisionLimit(_)
                | Error::NonFinite(_)
                | Error::CannotFit(_)
        )
    }
}

impl Error {
    pub fn located(self, at: impl Into<String>) -> Error {
        Error::Located { at: at.into(), source: Box::new(self) }
    }

    /// The innermost error, looking through location wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Located { source, .. } => source.root(),
            e => e,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
