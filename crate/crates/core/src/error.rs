use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("invalid construction: {0}")]
    Construction(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("covector is outside the dual cone")]
    OutsideDualCone,

    #[error("numeric dual oracle did not converge (best bound {best_bound})")]
    NoConvergence { best_bound: f64 },

    #[error("no extremal passes through this covector: {0}")]
    NoMaximum(String),

    #[error("unknown scenario `{name}`; available: {available}")]
    UnknownScenario { name: String, available: String },

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("invariant violated at `{path}`: {message}")]
    Invariant { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { path: path.into(), message: message.into() }
    }

    pub(crate) fn invariant(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invariant { path: path.into(), message: message.into() }
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}
