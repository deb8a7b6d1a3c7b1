use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] shishkin_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl LabError {
    /// 1 for configuration and I/O problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Numerical(_) => 2,
            _ => 1,
        }
    }
}

pub type LabResult<T> = Result<T, LabError>;

pub(crate) fn config_error(msg: impl Into<String>) -> LabError {
    LabError::Config(msg.into())
}
