use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("unsupported phase mode: {0}")]
    UnsupportedMode(String),

    #[error("{what} = {value} out of range 0..{bound}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        bound: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("signature ({0}, {1}) does not belong to any codeword")]
    UndecodableSignature(usize, usize),

    #[error("invalid tolerance {0}: must be positive and finite")]
    InvalidTolerance(f64),

    #[error("{0}")]
    Usage(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("consistency check failed: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn odd(d: usize) -> Self {
        Error::InvalidDimension(format!(
            "d = {d}: no symmetrized basis exists for odd d (d must be even and >= 2)"
        ))
    }
}

/// Rejects anything that is not an even dimension `d >= 2`.
pub(crate) fn check_even(d: usize) -> Result<()> {
    if d == 0 {
        Err(Error::InvalidDimension("d = 0".into()))
    } else if d % 2 == 1 {
        Err(Error::odd(d))
    } else {
        Ok(())
    }
}
