use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Io(#[from] io::Error),

    /// A line of an input file could not be parsed or failed validation.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("lines {first} and {second}: duplicate {what}")]
    Duplicate {
        first: usize,
        second: usize,
        what: String,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("node {0} has no neighbors")]
    IsolatedNode(u32),

    #[error(
        "precomputed transition tables need {needed} entries but the budget is {budget}; \
         lower the degree threshold (--tau) or use --tau 0 for fully on-demand sampling"
    )]
    MemoryBudget { needed: u64, budget: u64 },

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn param(message: impl Into<String>) -> Self {
        Error::InvalidParam(message.into())
    }

    /// Whether the error stems from bad user input rather than a failing stage.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::MemoryBudget { .. })
    }
}
