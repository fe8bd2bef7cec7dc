use std::path::PathBuf;

use thiserror::Error;

use crate::model::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("point {point} is outside the domain of size {domain_size}")]
    DomainMismatch { point: Point, domain_size: u32 },

    #[error("no hypothesis in the class is consistent with the training sequence")]
    NoConsistentHypothesis,

    #[error("{what}: {requested} exceeds the configured cap of {limit}")]
    OverCap {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }
}
