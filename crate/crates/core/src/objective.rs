//! Step-response score: rise time over the horizon plus the largest excursion
//! outside the settling band.
//!
//! The band's upper edge applies to every sample after `t = 0`; the lower edge
//! only applies after the rise time. A response that never reaches the rise
//! level scores a rise term of 1 and has no lower-edge window at all.
//!
//! Diverged responses have a pinned tail at `±blow_up_limit`. By default that
//! tail is charged in proportion to the share of samples it covers (see
//! [`DivergencePenalty`]), which keeps unstable candidates ordered by how late
//! they blow up.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lti::{
    close_unity_feedback, pid_transfer_function, simulate_step, tf_to_state_space, PidGains,
    SimConfig, StepResponse, TransferFunction,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SettlingBand {
    pub upper: f64,
    pub lower: f64,
    pub rise_level: f64,
}

impl Default for SettlingBand {
    fn default() -> Self {
        Self {
            upper: 1.02,
            lower: 0.98,
            rise_level: 0.98,
        }
    }
}

impl SettlingBand {
    pub fn new(upper: f64, lower: f64, rise_level: f64) -> Result<Self> {
        if lower <= rise_level && rise_level < upper {
            Ok(Self {
                upper,
                lower,
                rise_level,
            })
        } else {
            Err(Error::InvalidConfig(format!(
                "settling band needs lower <= rise_level < upper, got {lower}, {rise_level}, {upper}"
            )))
        }
    }
}

/// Score of one response. `total == rise_term + deviation` holds exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveValue {
    pub total: f64,
    pub rise_time: f64,
    pub rise_term: f64,
    pub deviation: f64,
    pub rose: bool,
}

impl ObjectiveValue {
    pub fn from_parts(rise_time: f64, t_max: f64, deviation: f64, rose: bool) -> Self {
        let rise_term = rise_time / t_max;
        Self {
            total: rise_term + deviation,
            rise_time,
            rise_term,
            deviation,
            rose,
        }
    }
}

/// First time the response reaches `band.rise_level`, linearly interpolated
/// between the bracketing samples. Returns `(t_max, false)` if it never does.
pub fn rise_time(resp: &StepResponse, band: &SettlingBand) -> (f64, bool) {
    let level = band.rise_level;
    match resp.values.iter().position(|&z| z >= level) {
        None => (resp.t_max, false),
        Some(0) => (0.0, true),
        Some(k) => {
            let (z0, z1) = (resp.values[k - 1], resp.values[k]);
            // z0 < level <= z1, so the fraction lies in (0, 1]
            let frac = (level - z0) / (z1 - z0);
            (resp.time(k - 1) + frac * resp.dt, true)
        }
    }
}

/// Largest violation of the settling band.
pub fn band_deviation(resp: &StepResponse, band: &SettlingBand, rise: f64, rose: bool) -> f64 {
    window_deviation(&resp.values, resp.dt, band, rise, rose)
}

fn window_deviation(values: &[f64], dt: f64, band: &SettlingBand, rise: f64, rose: bool) -> f64 {
    let mut worst = 0.0f64;
    for (k, &z) in values.iter().enumerate().skip(1) {
        worst = worst.max(z - band.upper);
        if rose && k as f64 * dt > rise {
            worst = worst.max(band.lower - z);
        }
    }
    worst
}

/// How the pinned tail of a diverged response enters the deviation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivergencePenalty {
    /// The tail is scored like any other samples. A response that runs off
    /// towards `-blow_up_limit` without ever rising then costs nothing extra,
    /// so all such responses tie at `f = 1`.
    Pinned,
    /// The tail costs `(blow_up_limit - band.lower)` times the fraction of
    /// samples that are pinned, so even a run pinned only at the last sample
    /// pays about `blow_up_limit * dt / t_max`. This replaces the band
    /// deviation, whose pre-divergence samples are already close to the limit.
    #[default]
    HorizonWeighted,
}

/// Scores an already simulated response with the default divergence penalty.
pub fn score_response(resp: &StepResponse, band: &SettlingBand) -> ObjectiveValue {
    score_response_with(resp, band, DivergencePenalty::default())
}

pub fn score_response_with(
    resp: &StepResponse,
    band: &SettlingBand,
    penalty: DivergencePenalty,
) -> ObjectiveValue {
    let (rise, rose) = rise_time(resp, band);
    let deviation = match (penalty, resp.diverged_at) {
        (DivergencePenalty::HorizonWeighted, Some(k_div)) => {
            let limit = resp.values[k_div].abs();
            let pinned = (resp.len() - k_div) as f64;
            (limit - band.lower) * pinned / resp.len() as f64
        }
        _ => band_deviation(resp, band, rise, rose),
    };
    ObjectiveValue::from_parts(rise, resp.t_max, deviation, rose)
}

/// Closed-loop unit-step response of `plant` under an ideal PID with `gains`.
pub fn closed_loop_response(
    gains: PidGains,
    plant: &TransferFunction,
    cfg: &SimConfig,
) -> Result<StepResponse> {
    let controller = pid_transfer_function(gains)?;
    let loop_tf = close_unity_feedback(&controller, plant)?;
    let ss = tf_to_state_space(&loop_tf)?;
    Ok(simulate_step(&ss, cfg))
}

/// Composes the loop, simulates it and scores the response.
pub fn evaluate(
    gains: PidGains,
    plant: &TransferFunction,
    cfg: &SimConfig,
    band: &SettlingBand,
) -> Result<ObjectiveValue> {
    let resp = closed_loop_response(gains, plant, cfg)?;
    Ok(score_response(&resp, band))
}
