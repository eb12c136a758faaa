use thiserror::Error;

use crate::fock::Truncation;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("truncation mismatch: {left:?} vs {right:?}")]
    TruncationMismatch { left: Truncation, right: Truncation },

    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),

    #[error("guard band of width {guard} cannot hold a {order}-phonon exchange")]
    GuardViolation { guard: usize, order: u32 },

    #[error("sideband order k = {0} is not supported here (closed form requires k = 4)")]
    UnsupportedOrder(u32),

    #[error("operator is not Hermitian (max |H - H^dag| = {0:e})")]
    NotHermitian(f64),

    #[error("step {step}: measurement branch has probability {probability:e}")]
    DegenerateBranch { step: usize, probability: f64 },

    #[error("step {step}: guard-band leakage {leakage:e} exceeds limit {limit:e}")]
    Leakage {
        step: usize,
        leakage: f64,
        limit: f64,
    },

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
