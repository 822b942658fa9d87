use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not skew-symmetric (symmetric part {0:.3e})")]
    NotSkew(f64),

    #[error("matrix is not a rotation (orthogonality error {0:.3e})")]
    NotRotation(f64),

    #[error("rotation angle {0} is within 1e-6 of pi; the rotation axis is ambiguous")]
    AmbiguousAxis(f64),

    #[error("clock block is not nilpotent (|B^2| = {0:.3e})")]
    NotNilpotent(f64),

    #[error("angle must be finite and non-negative, got {0}")]
    InvalidAngle(f64),

    #[error("step size must be finite and positive, got {0}")]
    InvalidStep(f64),

    #[error("substeps must be at least 1")]
    InvalidSubsteps,

    #[error("unknown integration method `{0}` (expected closed, rk4 or euler)")]
    UnknownMethod(String),

    #[error("scenario line {line}: {message}")]
    Scenario { line: usize, message: String },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("IMU CSV row {row}: {message}")]
    Csv { row: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
