use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("({dx},{dy}) is neither the SE step nor a face-step")]
    InvalidStep { dx: i64, dy: i64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("walk rejected: {0}")]
    Rejected(String),

    #[error("enumeration size {requested} exceeds the configured cap {cap}")]
    CapExceeded { requested: usize, cap: usize },

    #[error("cell ({i},{j}) of layer {n} lies above the computed height bound {bound}")]
    OutOfTable { n: usize, i: i64, j: i64, bound: i64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub type Result<T> = std::result::Result<T, Error>;
