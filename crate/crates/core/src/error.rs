use thiserror::Error;

use crate::chars::QuadForm;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("genus mismatch: {left} vs {right}")]
    GenusMismatch { left: usize, right: usize },

    #[error("unsupported genus {genus}: {reason}")]
    UnsupportedGenus { genus: usize, reason: &'static str },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("expected {expected} forms, got {got}")]
    WrongCount { expected: usize, got: usize },

    #[error("matrix is not symplectic")]
    NotSymplectic,

    #[error("not an Aronhold set")]
    NotAronhold,

    #[error("not a fundamental system")]
    NotFundamental,

    #[error("characteristic {0} has the wrong parity for this operation")]
    WrongParity(QuadForm),

    #[error("characteristics must be distinct, {0} is repeated")]
    Repeated(QuadForm),

    #[error("invalid precondition: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid Riemann matrix: {0}")]
    InvalidTau(String),

    #[error("tau rejected: theta null of {form} has modulus {modulus:e}")]
    TauRejected { form: QuadForm, modulus: f64 },

    #[error("truncation radius {radius} is below the {required} needed for tail {tail:e}")]
    InsufficientRadius {
        radius: usize,
        required: usize,
        tail: f64,
    },

    #[error("numerical check failed: {0}")]
    Verification(String),

    /// A constructive routine failed its own postcondition.
    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
