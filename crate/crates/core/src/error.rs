use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the simulator and sweep engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("scaled time s = {0} is outside [0, 1]")]
    ScaledTime(f64),

    #[error("instantaneous gap vanished at s = {0}")]
    DegenerateGap(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("basis mismatch: expected {expected:?}, found {found:?}")]
    BasisMismatch {
        expected: crate::dynamics::Basis,
        found: crate::dynamics::Basis,
    },

    #[error("integration failed at tf = {tf}: constraint violation {violation:.3e} after {steps} steps")]
    Integration { tf: f64, steps: usize, violation: f64 },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("all {0} sweep cells failed")]
    SweepFailed(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
