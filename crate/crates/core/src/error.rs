use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid angular momentum label: {0}")]
    InvalidLabel(String),
    #[error("irrep label {label} out of range for {model}")]
    LabelOutOfRange { label: String, model: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("qubit count {0} outside the supported range")]
    UnsupportedSize(usize),
    #[error("unsupported for this model: {0}")]
    Unsupported(String),
    #[error("sector {0} carries no phase-space component (tau = 0)")]
    AbsentSector(String),
    #[error("quadrature grid under-resolved: {0}")]
    UnderResolved(String),
    #[error("filter is not invertible on sector {0}")]
    NonInvertibleFilter(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
