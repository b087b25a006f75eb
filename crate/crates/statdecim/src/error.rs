use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed image: {0}")]
    Format(String),
    #[error("PGM input needs a binarization threshold (--threshold)")]
    MissingThreshold,
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] statdecim_core::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io { path: path.to_path_buf(), source }
    }

    /// Process exit code: 2 usage, 3 data, 4 numeric.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Usage(_) | Error::MissingThreshold => 2,
            Error::Core(e) if e.is_numeric() => 4,
            Error::Core(statdecim_core::Error::InvalidParameter(_)) => 2,
            _ => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
