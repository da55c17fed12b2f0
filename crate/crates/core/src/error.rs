use std::path::PathBuf;

/// Errors raised anywhere in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("rank deficiency: expected rank {expected}, got {actual} after {attempts} attempt(s)")]
    RankDeficient {
        expected: usize,
        actual: usize,
        attempts: u32,
    },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("infeasible parent mapping: {0}")]
    InfeasibleMapping(String),

    #[error("inconsistent prior levels: H_{level} * sum is not divisible by 2^{level} at row {row}")]
    Divisibility { level: usize, row: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("missing required key `{0}`")]
    MissingKey(String),

    #[error("size guard exceeded: {0}")]
    TooLarge(String),

    #[error("infeasible target: {0}")]
    Infeasible(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
