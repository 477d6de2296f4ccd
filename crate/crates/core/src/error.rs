//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An edge `(u, u)` was supplied; the edge universe has no self-loops.
    #[error("self-loop on vertex {0} is not a valid edge")]
    SelfLoop(usize),

    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("element {element} is outside the universe [0, {size})")]
    OutOfUniverse { element: u64, size: u64 },

    /// Structurally malformed input (wrong arity, repeated variables, bad lengths).
    #[error("rejected input: {0}")]
    InvalidInput(String),

    /// A configuration value outside its documented domain.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A quantity that has no value on the given input (empty graph, empty union, ...).
    #[error("undefined: {0}")]
    Undefined(String),

    /// An enumeration or representation limit was exceeded.
    #[error("{what} = {got} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        got: u64,
        cap: u64,
    },

    #[error("element {element} reached multiplicity {count}, above the counter cap {cap}")]
    MultiplicityExceeded { element: u64, count: i64, cap: i64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
