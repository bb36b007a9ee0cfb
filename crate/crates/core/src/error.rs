use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} needs {required} but the configured limit is {limit} (raise it with {flag})")]
    GuardExceeded {
        what: String,
        required: String,
        limit: u64,
        flag: &'static str,
    },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("index {index} out of range for {len} items")]
    OutOfRange { index: u64, len: u64 },

    #[error("expected a loopless graph, edge {edge} is a loop")]
    UnexpectedLoop { edge: usize },

    #[error("variable set mismatch: {left} vs {right}")]
    VariableMismatch { left: String, right: String },

    #[error("unknown variable `{var}` for variables {vars}")]
    UnknownVariable { var: String, vars: String },

    #[error("variable `{var}` has no value assigned")]
    Unassigned { var: String },

    #[error("interpolation: {0}")]
    Interpolation(String),

    #[error("polynomial has y-degree {degree}, above the edge count {k}")]
    DegreeTooHigh { degree: u32, k: usize },

    #[error("subset lattice has {got} values, expected {expected}")]
    IncompleteLattice { got: usize, expected: usize },

    #[error("graph vectors disagree on shape: {0}")]
    ShapeMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub fn is_guard(&self) -> bool {
        matches!(self, Error::GuardExceeded { .. })
    }
}
