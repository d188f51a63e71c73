use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("duplicate fact id `{0}`")]
    DuplicateId(String),

    #[error("unknown fact id `{0}`")]
    UnknownFact(String),

    #[error("cannot build an index over an empty corpus")]
    EmptyCorpus,

    #[error("invalid question `{id}`: {reason}")]
    InvalidQuestion { id: String, reason: String },

    #[error("question `{0}` has no gold answer")]
    MissingGold(String),

    #[error("kernel matrix is singular: {0}")]
    SingularKernel(String),

    #[error("brute-force oracle supports at most {limit} vertices, graph has {actual}")]
    OracleTooLarge { limit: usize, actual: usize },

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by malformed or inconsistent input data, as
    /// opposed to bad configuration or missing files.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::DuplicateId(_)
                | Error::UnknownFact(_)
                | Error::EmptyCorpus
                | Error::InvalidQuestion { .. }
                | Error::MissingGold(_)
                | Error::Json(_)
                | Error::Csv(_)
        )
    }
}
