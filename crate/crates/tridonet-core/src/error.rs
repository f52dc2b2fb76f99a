use thiserror::Error;

/// Error type shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("state mismatch: {0}")]
    StateMismatch(String),

    #[error("missing files: {}", .0.join(", "))]
    MissingFiles(Vec<String>),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 usage/config, 3 I/O, 4 state mismatch.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidArgument(_) | Error::ShapeMismatch(_) => 2,
            Error::Io(_) | Error::Json(_) | Error::MissingFiles(_) | Error::Checkpoint(_) => 3,
            Error::StateMismatch(_) => 4,
        }
    }
}
