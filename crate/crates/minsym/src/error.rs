use std::io;
use std::path::PathBuf;

use minsym_core::sampler::SampleError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{} already exists; pass --force to overwrite", .0.display())]
    Exists(PathBuf),
    #[error("{}:{line}: {msg}", path.display())]
    Malformed { path: PathBuf, line: usize, msg: String },
    #[error("{}: bucket {bucket} holds {actual} records but the manifest lists {expected}", path.display())]
    CountMismatch { path: PathBuf, bucket: usize, expected: usize, actual: usize },
    #[error("unsupported format version {found} (supported: {supported})")]
    Version { found: u32, supported: u32 },
    #[error("bucket purity violated: record {id} (line {line}) is stored as min_m={stored} but solves to {actual}")]
    Purity { id: u64, line: usize, stored: usize, actual: String },
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Core(#[from] minsym_core::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }

    pub(crate) fn malformed(path: impl Into<PathBuf>, line: usize, msg: impl ToString) -> Error {
        Error::Malformed { path: path.into(), line, msg: msg.to_string() }
    }

    /// Process exit code for this error: 2 for invalid parameters, 3 for
    /// I/O, 4 for an incomplete sampling run, 5 for bad or inconsistent
    /// data files.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Core(_) | Error::Sample(SampleError::Config(_)) => 2,
            Error::Io { .. } | Error::Exists(_) => 3,
            Error::Sample(SampleError::Exhausted(_)) => 4,
            Error::Malformed { .. } | Error::CountMismatch { .. } | Error::Version { .. } | Error::Purity { .. } => 5,
        }
    }
}
