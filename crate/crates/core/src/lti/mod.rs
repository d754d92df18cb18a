//! Linear time-invariant plumbing: transfer functions, the PID loop,
//! state-space realization and fixed-step step-response simulation.

pub mod poly;
mod simulate;
mod state_space;
mod transfer_function;

use serde::{Deserialize, Serialize};

pub use simulate::{rk4_step, simulate_step, SimConfig, StepResponse};
pub use state_space::{tf_to_state_space, StateSpace};
pub use transfer_function::{parse_ratio, TransferFunction};

use crate::error::{Error, Result};

/// PID coefficients `[kp, ki, kd]`, the decision vector of the tuner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PidGains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
}

impl PidGains {
    pub fn new(kp: f64, ki: f64, kd: f64) -> Result<Self> {
        let g = Self { kp, ki, kd };
        if g.is_finite() {
            Ok(g)
        } else {
            Err(Error::InvalidGains(format!("{g:?}")))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.kp.is_finite() && self.ki.is_finite() && self.kd.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.kp, self.ki, self.kd]
    }

    pub fn from_array([kp, ki, kd]: [f64; 3]) -> Self {
        Self { kp, ki, kd }
    }
}

/// Ideal parallel PID `(kd s^2 + kp s + ki) / s`, kept uncancelled.
pub fn pid_transfer_function(gains: PidGains) -> Result<TransferFunction> {
    TransferFunction::controller(vec![gains.kd, gains.kp, gains.ki], vec![1.0, 0.0])
}

/// Unity negative feedback `C G / (1 + C G)` without common-factor cancellation.
pub fn close_unity_feedback(
    controller: &TransferFunction,
    plant: &TransferFunction,
) -> Result<TransferFunction> {
    let open_num = poly::trim(&poly::mul(controller.num(), plant.num()));
    let open_den = poly::mul(controller.den(), plant.den());
    let closed_den = poly::trim(&poly::add(&open_den, &open_num));

    let num_degree = poly::degree(&open_num);
    let den_degree = poly::degree(&closed_den);
    if num_degree > poly::degree(&open_den) || num_degree > den_degree || closed_den[0] == 0.0 {
        return Err(Error::ImproperLoop {
            num_degree,
            den_degree,
        });
    }
    TransferFunction::new(open_num, closed_den)
}
