//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by corpus synthesis, geometry, training, and file IO.
#[derive(Error, Debug)]
pub enum Error {
    /// A caller-supplied argument violates an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A configuration value is out of range or internally inconsistent.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// Shape parameters are degenerate (zero area / volume).
    #[error("degenerate shape: {0}")]
    DegenerateShape(String),

    /// Tensor shape mismatch detected at call time.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Training produced a non-finite loss or gradient.
    #[error("non-finite value in {context}: {detail}")]
    NonFinite { context: String, detail: String },

    /// A checkpoint was produced under a different configuration.
    /// Pass `allow_digest_mismatch` to load it anyway.
    #[error(
        "config digest mismatch: checkpoint carries {found}, expected {expected}; \
         re-run the producing stage or override the digest check"
    )]
    DigestMismatch { expected: String, found: String },

    /// Malformed checkpoint / grid / manifest file.
    #[error("bad file format: {0}")]
    BadFormat(String),

    /// A dataset split cannot be formed (class missing, too few examples).
    #[error("split error: {0}")]
    Split(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid_argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn invalid_config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }
}
