use thiserror::Error;

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("index out of range: {0}")]
    Range(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("duration table: {0}")]
    Table(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = WalkError> = std::result::Result<T, E>;
