//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by generators, estimators and the run engine.
#[derive(Debug, Error)]
pub enum Error {
    /// A model or operation parameter is outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An estimator was given an empty path or replication set.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// Sample paths in a replication set must share one run-length.
    #[error("run-length mismatch: path 0 has {expected} entries, path {index} has {got}")]
    LengthMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },

    /// NaN observations are rejected at ingestion; the marginal CDF is
    /// assumed continuous and NaN has no place in the order statistics.
    #[error("NaN entry at index {index}")]
    NanEntry { index: usize },

    /// Autocovariance truncation lag must stay below the run-length.
    #[error("max_lag {max_lag} must be smaller than run-length {run_length}")]
    LagTooLarge { max_lag: usize, run_length: usize },

    /// Batch-means estimation needs enough batches to be meaningful.
    #[error("{got} batches of size {batch_size} from {len} entries; need at least {min}")]
    TooFewBatches {
        got: usize,
        min: usize,
        batch_size: usize,
        len: usize,
    },

    /// A replication worker failed; identifies the failing path.
    #[error("replication {replication} (stream id {stream_id:#018x}) failed: {source}")]
    ReplicationFailed {
        replication: usize,
        stream_id: u64,
        #[source]
        source: Box<Error>,
    },

    /// The worker thread pool could not be constructed.
    #[error("worker pool: {0}")]
    WorkerPool(String),
}

pub type Result<T> = std::result::Result<T, Error>;
