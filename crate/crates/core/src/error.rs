use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the tuning toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("denominator must be non-empty with a nonzero leading coefficient")]
    DegenerateDenominator,

    #[error("non-finite coefficient {value} in {part}")]
    NonFiniteCoefficient { part: &'static str, value: f64 },

    #[error("improper system: numerator degree {num_degree} exceeds denominator degree {den_degree}")]
    ImproperSystem { num_degree: usize, den_degree: usize },

    #[error(
        "improper closed loop: numerator degree {num_degree} exceeds denominator degree {den_degree} \
         (an ideal PID with kd != 0 needs a plant of relative degree >= 2)"
    )]
    ImproperLoop { num_degree: usize, den_degree: usize },

    #[error("state-space dimensions are inconsistent: {0}")]
    Dimension(String),

    #[error("invalid gains: {0}")]
    InvalidGains(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no ultimate gain found for k in (0, {k_max}]: {reason}")]
    NoUltimateGain { k_max: f64, reason: String },

    #[error("starting point has a non-finite score ({0})")]
    NonFiniteStart(f64),

    #[error("no destabilizing random start found in {0} draws")]
    ResampleExhausted(usize),

    #[error("cannot write output {path}: {source}")]
    OutputUnwritable {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
