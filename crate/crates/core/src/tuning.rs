//! Starting points for the search: Ziegler-Nichols gains from the ultimate
//! point of the proportional loop, and seeded uniform random gains.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lti::{poly, PidGains, TransferFunction};

/// Upper end of the proportional-gain range searched for the stability boundary.
pub const DEFAULT_K_SEARCH_MAX: f64 = 1e6;

const BISECTION_REL_TOL: f64 = 1e-9;
// Lowest gain tried when the loop is already unstable at k = 1.
const K_SEARCH_MIN: f64 = 1e-9;

/// Stability-boundary gain `ku` and oscillation period `tu` of the proportional loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UltimatePoint {
    pub ku: f64,
    pub tu: f64,
}

/// Characteristic polynomial `den + k num` of the loop closed around a pure gain `k`.
pub fn proportional_characteristic(plant: &TransferFunction, k: f64) -> Vec<f64> {
    poly::trim(&poly::add(plant.den(), &poly::scale(plant.num(), k)))
}

/// Largest real part over the closed-loop poles; `-inf` when there are none.
pub fn max_real_part(plant: &TransferFunction, k: f64) -> f64 {
    poly::roots(&proportional_characteristic(plant, k))
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn is_stable(plant: &TransferFunction, k: f64) -> bool {
    max_real_part(plant, k) < 0.0
}

pub fn ultimate_point(plant: &TransferFunction) -> Result<UltimatePoint> {
    ultimate_point_within(plant, DEFAULT_K_SEARCH_MAX)
}

/// Bisects on `k` for the first loss of stability of `den + k num`.
///
/// The bracket is found by doubling from `k = 1` up to `k_max` (or halving
/// downwards first when `k = 1` is already unstable).
pub fn ultimate_point_within(plant: &TransferFunction, k_max: f64) -> Result<UltimatePoint> {
    let fail = |reason: &str| Error::NoUltimateGain {
        k_max,
        reason: reason.to_string(),
    };

    let mut lo = 1.0f64.min(k_max);
    while !is_stable(plant, lo) {
        lo /= 2.0;
        if lo < K_SEARCH_MIN {
            return Err(fail("the proportional loop is unstable for every gain tried"));
        }
    }
    let mut hi = lo;
    loop {
        if hi >= k_max {
            return Err(fail("the proportional loop stays stable"));
        }
        let next = (hi * 2.0).min(k_max);
        if !is_stable(plant, next) {
            hi = next;
            break;
        }
        lo = next;
        hi = next;
    }

    while hi - lo > BISECTION_REL_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if is_stable(plant, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let ku = 0.5 * (lo + hi);

    let boundary = poly::roots(&proportional_characteristic(plant, ku))
        .into_iter()
        .max_by(|a, b| a.re.total_cmp(&b.re))
        .ok_or_else(|| fail("closed loop has no poles"))?;
    let omega = boundary.im.abs();
    if omega <= 1e-9 * (1.0 + boundary.re.abs()) || !omega.is_finite() {
        return Err(fail("stability is lost through a real pole, no sustained oscillation"));
    }
    Ok(UltimatePoint {
        ku,
        tu: 2.0 * PI / omega,
    })
}

/// Classic Ziegler-Nichols PID row: `kp = 0.6 ku`, `Ti = tu/2`, `Td = tu/8`.
pub fn zn_pid_gains(up: UltimatePoint) -> PidGains {
    PidGains {
        kp: 0.6 * up.ku,
        ki: 1.2 * up.ku / up.tu,
        kd: 0.075 * up.ku * up.tu,
    }
}

/// Box and seed for uniform random starting gains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomStartConfig {
    pub seed: u64,
    pub low: [f64; 3],
    pub high: [f64; 3],
}

impl RandomStartConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            low: [-10.0; 3],
            high: [10.0; 3],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self
            .low
            .iter()
            .zip(&self.high)
            .all(|(l, h)| l.is_finite() && h.is_finite() && l < h);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "random bounds need low < high per gain, got {:?} and {:?}",
                self.low, self.high
            )))
        }
    }
}

/// Stream of uniform gain triples.
///
/// Backed by ChaCha8 seeded with `seed_from_u64`, so a seed gives the same
/// sequence on every platform.
#[derive(Debug, Clone)]
pub struct RandomStarts {
    cfg: RandomStartConfig,
    rng: ChaCha8Rng,
}

impl RandomStarts {
    pub fn new(cfg: RandomStartConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            cfg,
        })
    }
}

impl Iterator for RandomStarts {
    type Item = PidGains;

    fn next(&mut self) -> Option<PidGains> {
        let mut g = [0.0; 3];
        for (i, slot) in g.iter_mut().enumerate() {
            *slot = self.rng.gen_range(self.cfg.low[i]..=self.cfg.high[i]);
        }
        Some(PidGains::from_array(g))
    }
}

/// First triple of the seeded stream.
pub fn random_gains(cfg: RandomStartConfig) -> Result<PidGains> {
    Ok(RandomStarts::new(cfg)?
        .next()
        .expect("random stream is infinite"))
}
