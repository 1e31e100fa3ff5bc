use thiserror::Error;

/// Errors raised by the simulation core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value in {what} at index {index}")]
    NonFinite { what: &'static str, index: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("magnetic field undefined at ({x}, {y})")]
    FieldDomain { x: f64, y: f64 },

    #[error("sampling failed: {0}")]
    Sampling(String),

    #[error("malformed ensemble file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_finite(values: &[f64], what: &'static str) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { what, index }),
        None => Ok(()),
    }
}
