use thiserror::Error;

/// Errors produced by the flagcert library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph too large: {n} vertices (limit {limit})")]
    TooLarge { n: usize, limit: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("notation parse error at byte {pos}: {msg}")]
    Notation { pos: usize, msg: String },

    #[error("label count mismatch: {0} vs {1}")]
    LabelMismatch(usize, usize),

    #[error("flag has {have} vertices but target size is {want}")]
    ExceedsTarget { have: usize, want: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid graphon: {0}")]
    Graphon(String),

    #[error("invalid rational `{0}`")]
    Rational(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid SDP configuration: {0}")]
    Config(String),

    #[error("solver objective mismatch: primal {primal}, dual {dual}")]
    ObjectiveMismatch { primal: f64, dual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
