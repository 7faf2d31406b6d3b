use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    /// Schema file malformed, or a cell outside its column's vocabulary.
    #[error("schema: {0}")]
    Schema(String),

    /// Malformed input line.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Well-formed input whose contents cannot be processed.
    #[error("data: {0}")]
    Data(String),

    #[error("stratification: {0}")]
    Stratification(String),

    #[error("argument: {0}")]
    Argument(String),

    #[error(transparent)]
    Core(#[from] punn_core::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
