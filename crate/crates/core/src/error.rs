use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate edge between check {check} and variable {var}")]
    DuplicateEdge { check: usize, var: usize },

    #[error("{what} index {index} out of range (bound {bound})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("variable {0} has no incident check")]
    IsolatedVariable(usize),

    #[error("check {0} has no incident variable")]
    EmptyCheck(usize),

    #[error("could not reach girth {target} within {attempts} attempts")]
    GirthUnreachable { target: usize, attempts: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("{what} of size {size} exceeds the guard {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("repetition factor {0} is not a positive even number")]
    OddRepetition(usize),

    #[error("interleaver is not a permutation of 0..{0}")]
    InvalidPermutation(usize),

    #[error("subgraph of the codeword is not Eulerian at node {0}")]
    NotEulerian(String),

    #[error("the zero codeword has no decomposition")]
    ZeroCodeword,

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid cycle: {0}")]
    InvalidCycle(String),

    #[error("expected an LLR vector tagged {expected}, found {found}")]
    WrongChannel {
        expected: &'static str,
        found: &'static str,
    },

    #[error("path length {h} is not below the girth {girth}")]
    GirthViolation { h: usize, girth: usize },

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.into(),
        }
    }
}
