use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("arity mismatch: polynomial has {poly} generators, tuple has {tuple}")]
    ArityMismatch { poly: usize, tuple: usize },
    #[error("generator-count mismatch: {0} vs {1}")]
    GeneratorCountMismatch(usize, usize),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown generator X{index} (only {m} generators available)")]
    UnknownGenerator { index: usize, m: usize },
    #[error("det(...) requires the matrix size n")]
    DetWithoutSize,
    #[error("trace of a constant requires the matrix size n")]
    TraceOfConstantWithoutSize,
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("polynomial contains trace factors; a trace-free polynomial is required")]
    NotTraceFree,
    #[error("invalid scalar `{0}`")]
    InvalidScalar(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("resource ceiling exceeded: {what} needs {needed}, ceiling is {ceiling}")]
    Resource {
        what: &'static str,
        needed: u128,
        ceiling: u128,
    },
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
