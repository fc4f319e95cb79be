use thiserror::Error;

/// Every failure the engine reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("coefficient field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("ring context mismatch")]
    ContextMismatch,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("zero polynomial has no leading data")]
    ZeroPolynomial,
    #[error("unsupported cone: {0}")]
    UnsupportedCone(String),
    #[error("search for module generators incomplete within radius {radius}")]
    IncompleteSearch { radius: i64 },
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("degenerate polytope: {0}")]
    Degenerate(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}
