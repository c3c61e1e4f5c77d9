use thiserror::Error;

/// Errors produced by the analysis pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("value out of range: {0}")]
    Range(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unsupported window: {0}")]
    UnsupportedWindow(String),
    #[error("no entries selected above the energy quantile")]
    EmptyCloud,
    #[error("degenerate point cloud: {0}")]
    DegenerateCloud(String),
    #[error("ridge extraction failed: {0}")]
    Extraction(String),
    #[error("reconstruction failed: {0}")]
    Reconstruction(String),
    #[error("metric undefined: {0}")]
    UndefinedMetric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
