//! PID gain tuning by direct search on simulated closed-loop step responses.
//!
//! The pipeline is: ideal PID and plant transfer functions are closed in a unity
//! feedback loop, realized in controllable canonical form and simulated with
//! fixed-step RK4. The unit-step response is scored by its rise time (to 0.98)
//! over the horizon plus its worst excursion outside the `[0.98, 1.02]` band,
//! and a compass search minimizes that score over `[kp, ki, kd]`, logging every
//! evaluation.

pub mod cli;
pub mod error;
pub mod lti;
pub mod objective;
pub mod render;
pub mod search;
pub mod tuning;

pub use error::{Error, Result};
pub use lti::{PidGains, SimConfig, StepResponse, TransferFunction};
pub use objective::{evaluate, ObjectiveValue, SettlingBand};
pub use search::{optimize, EvaluationRecord, SearchConfig, SearchTrace, Termination};
