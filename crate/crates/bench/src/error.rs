use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Core(#[from] edgecount::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    /// Bad configuration, reported as a usage error by the CLI.
    #[error("config: {0}")]
    Config(String),
}

pub type BenchResult<T> = std::result::Result<T, BenchError>;

pub(crate) fn config_err(msg: impl Into<String>) -> BenchError {
    BenchError::Config(msg.into())
}
