use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("mode index {index} out of range for {modes} modes")]
    ModeOutOfRange { index: usize, modes: usize },

    #[error("empty operator list")]
    EmptyTensor,

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("steady state is not unique: {0}")]
    DegenerateSteadyState(String),

    #[error("time integration failed: {0}")]
    Integration(String),

    #[error("input state is not stationary: |L rho| = {0:.3e}")]
    NotStationary(f64),

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown figure preset `{0}`; expected one of fig2a, fig2bcd, fig3ab, fig3c, fig4, fig5, fig6")]
    UnknownPreset(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
