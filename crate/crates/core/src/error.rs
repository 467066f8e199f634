use thiserror::Error;

use crate::chain::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state id {state} out of range for a chain with {len} states")]
    StateOutOfRange { state: usize, len: usize },

    #[error("invalid chain: {0}")]
    Invalid(ValidationReport),

    #[error("chain has {rows} rows but {labels} labels")]
    Shape { rows: usize, labels: usize },

    #[error("partition covers {found} states, expected {expected}")]
    PartitionSize { expected: usize, found: usize },

    #[error("partition is not lumpable: {0}")]
    NotLumpable(String),

    #[error("states with no path to any target: {0:?}")]
    Trapped(Vec<String>),

    #[error("brute-force search limited to {limit} states, chain has {states}")]
    TooLarge { states: usize, limit: usize },

    #[error("minimal lumpable partition is not unique: {count} partitions with {blocks} blocks")]
    NonUniqueMinimum { count: usize, blocks: usize },

    #[error("bad parameter: {0}")]
    Parameter(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{field}: {message}")]
    Field { field: String, message: String },

    #[error("unknown label {0:?}")]
    UnknownLabel(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
