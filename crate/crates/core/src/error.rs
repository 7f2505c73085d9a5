use std::path::PathBuf;

/// Errors produced by the audit toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// The score matrix has missing cells where a complete matrix is needed.
    #[error("score matrix has {missing} missing cell(s); impute or drop them first")]
    MustImpute { missing: usize },

    /// An exhaustive search would exceed its evaluation budget.
    #[error("search space of {estimate} evaluations exceeds the limit of {limit}")]
    GuardExceeded { estimate: f64, limit: f64 },

    /// A finite-difference probe straddles a hinge kink.
    #[error("gradient check inconclusive: {0}")]
    InconclusiveCheck(String),

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Json { .. } => 2,
            Error::GuardExceeded { .. } => 4,
            Error::Io { .. } => 1,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
