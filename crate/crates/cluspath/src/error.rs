use thiserror::Error;

/// Errors produced by dataset loading and model fitting.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("duplicate (entity, timestamp) pair at line {line}: entity `{entity}` already has an observation at t={time}")]
    DuplicateTimestamp {
        line: usize,
        entity: String,
        time: f64,
    },

    #[error("non-numeric feature value `{value}` at line {line}, column `{column}`")]
    NonNumericFeature {
        line: usize,
        column: String,
        value: String,
    },

    #[error("missing required column `{0}` in header")]
    MissingColumn(String),

    #[error("dataset is degenerate: {0}")]
    DegenerateDataset(String),

    #[error("descriptor dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("unknown entity `{0}`")]
    UnknownEntity(String),

    #[error("solver produced a non-finite objective at iteration {iteration}; state dump: {dump}")]
    NonFiniteObjective { iteration: usize, dump: String },

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
