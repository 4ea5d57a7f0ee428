use alloc::string::String;

/// Errors produced by the numerical core.
///
/// Each variant is a distinct failure category; the CLI maps them onto
/// machine-readable exit categories.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("empty region: amplitude amplification target has zero weight")]
    EmptyRegion,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
}

impl Error {
    /// Short stable identifier for the failure category.
    pub fn category(&self) -> &'static str {
        match self {
            Error::InvalidDimension(_) => "invalid-dimension",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::InvalidState(_) => "invalid-state",
            Error::DegenerateInput(_) => "degenerate-input",
            Error::Resource(_) => "resource",
            Error::EmptyRegion => "empty-region",
            Error::InsufficientData(_) => "insufficient-data",
            Error::InvalidData(_) => "invalid-data",
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
