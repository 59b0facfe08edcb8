use alloc::string::String;

use crate::codec::DecodeError;

/// Errors raised by the protocol core.
///
/// Protocol-level misbehaviour by other parties (bad proofs, malformed
/// messages) is reported as a rejected verification, never through this type.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("message {0} outside Z_p")]
    MessageOutOfRange(u64),

    #[error("secret {0} outside Z_p")]
    SecretOutOfRange(u64),

    #[error("claimed share {0} outside Z_p")]
    ShareOutOfRange(u64),

    #[error("retry cap exhausted: {0}")]
    RetryExhausted(&'static str),

    #[error("threshold {t} must be below the number of shares {n}")]
    ThresholdTooLarge { t: usize, n: usize },

    #[error("field Z_{p} has too few nonzero points for {n} shares")]
    FieldTooSmall { n: usize, p: u64 },

    #[error("duplicate evaluation index {0}")]
    DuplicateIndex(u64),

    #[error("evaluation index 0 is reserved for the secret")]
    IndexZero,

    #[error("evaluation index {index} is not a nonzero element of Z_{p}")]
    IndexOutOfField { index: u64, p: u64 },

    #[error("empty index set")]
    EmptySet,

    #[error("parity matrix would have no columns (n = {n}, t = {t})")]
    DegenerateDims { n: usize, t: usize },

    #[error("witness does not satisfy the statement: {0}")]
    WitnessInvalid(&'static str),

    #[error("participant is in phase {got:?}, expected {expected:?}")]
    WrongPhase {
        expected: crate::drng::Phase,
        got: crate::drng::Phase,
    },

    #[error("participant {0} is not a qualified dealer")]
    NotQualified(u64),

    #[error("only {qual} participants qualified, reconstruction needs {needed}")]
    QualTooSmall { qual: usize, needed: usize },

    #[error("participant id {0} is invalid here")]
    InvalidParticipant(u64),

    #[error("decode failed: {0}")]
    Decode(#[from] DecodeError),
}

pub type Result<T> = core::result::Result<T, Error>;
