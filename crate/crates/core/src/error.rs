//! Unified error type for simulation, training, and weight I/O.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The integrator produced a non-finite component or one more
    /// negative than the clamping tolerance allows.
    #[error("integration diverged on day {day}: {component} = {value}")]
    IntegrationDiverged {
        day: u32,
        component: &'static str,
        value: f64,
    },

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    /// `step` was called on an environment whose episode already ended.
    #[error("episode is finished; reset the environment before stepping")]
    EpisodeFinished,

    #[error("{op}: expected shape {expected}, got {got}")]
    ShapeMismatch {
        op: &'static str,
        expected: String,
        got: String,
    },

    #[error("incoherent layer sizes: {0}")]
    SizeMismatch(String),

    #[error("replay buffer holds {len} transitions, {needed} required")]
    BufferTooSmall { len: usize, needed: usize },

    #[error("calibration infeasible: {0}")]
    CalibrationInfeasible(String),

    /// Malformed weight archive (bad magic, version, shape, or checksum).
    #[error("weight archive format: {0}")]
    Format(String),

    #[error("csv schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
