use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input fails a precondition of the requested operation.
    #[error("ineligible input: {0}")]
    Ineligible(String),

    /// A configured basis-size or degree ceiling was hit.
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),

    /// An internal postcondition failed; always a bug.
    #[error("engine invariant violated: {0}")]
    Engine(String),

    /// A randomized construction failed on every seed it tried.
    #[error("no attempt succeeded: {0}")]
    RetriesExhausted(String),

    #[error("semantic error in input: {0}")]
    Semantic(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
