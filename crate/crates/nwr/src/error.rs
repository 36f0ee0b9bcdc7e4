//! Crate-wide error types.

use thiserror::Error;

/// A text-format parse failure, with a line number when one is known.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{}{message}", .line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> Self {
        ParseError { line: None, message: message.into() }
    }

    pub fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError { line: Some(line), message: message.into() }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("assignment length {got} does not match circuit input count {want}")]
    AssignmentLength { got: usize, want: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("enumeration budget exceeded: {needed} profiles > budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("{0}")]
    InvalidInput(String),

    #[error("game is not a potential game: {0}")]
    NotPotential(String),

    #[error("non-potential behaviour detected during local search: {0}")]
    NonPotentialDetected(String),

    #[error("gadget is not verified (run verify_star first)")]
    UnverifiedGadget,

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
