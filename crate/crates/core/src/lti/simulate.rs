use serde::{Deserialize, Serialize};

use super::StateSpace;
use crate::error::{Error, Result};

/// Fixed-grid simulation settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub t_max: f64,
    pub dt: f64,
    pub blow_up_limit: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            t_max: 100.0,
            dt: 0.01,
            blow_up_limit: 1e6,
        }
    }
}

impl SimConfig {
    pub fn new(t_max: f64, dt: f64, blow_up_limit: f64) -> Result<Self> {
        let cfg = Self {
            t_max,
            dt,
            blow_up_limit,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.t_max.is_finite()
            && self.dt.is_finite()
            && self.t_max > 0.0
            && self.dt > 0.0
            && self.dt <= self.t_max
            && self.blow_up_limit > 2.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "need 0 < dt <= t_max and blow_up_limit > 2, got {self:?}"
            )))
        }
    }

    /// `floor(t_max / dt) + 1`.
    ///
    /// The quotient is nudged by a few ulps before flooring so that a horizon
    /// that is an exact decimal multiple of `dt` (100 / 0.01) keeps its last sample.
    pub fn sample_count(&self) -> usize {
        let q = self.t_max / self.dt;
        (q * (1.0 + 4.0 * f64::EPSILON)).floor() as usize + 1
    }
}

/// Unit-step response sampled at `t = k * dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepResponse {
    pub dt: f64,
    pub t_max: f64,
    pub values: Vec<f64>,
    pub diverged: bool,
    /// First pinned sample when `diverged`.
    pub diverged_at: Option<usize>,
}

impl StepResponse {
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// One classical Runge-Kutta step of `dx/dt = a x + b u` with constant `u`.
/// `a` is row-major `n x n`.
pub fn rk4_step(a: &[f64], b: &[f64], u: f64, h: f64, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let f = |y: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let row = &a[i * n..(i + 1) * n];
                row.iter().zip(y).map(|(p, q)| p * q).sum::<f64>() + b[i] * u
            })
            .collect()
    };
    let shifted = |k: &[f64], s: f64| -> Vec<f64> { x.iter().zip(k).map(|(xi, ki)| xi + s * ki).collect() };
    let k1 = f(x);
    let k2 = f(&shifted(&k1, h / 2.0));
    let k3 = f(&shifted(&k2, h / 2.0));
    let k4 = f(&shifted(&k3, h));
    (0..n)
        .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Affine map `x -> phi x + gamma` equal to one RK4 step under unit input.
///
/// The step is linear in `x`, so applying it once to each basis vector (no input)
/// and once to the origin (unit input) gives the map exactly.
struct Propagator {
    n: usize,
    phi: Vec<f64>,
    gamma: Vec<f64>,
}

impl Propagator {
    fn new(ss: &StateSpace, h: f64) -> Self {
        let n = ss.order();
        let a: Vec<f64> = (0..n * n).map(|idx| ss.a[(idx / n, idx % n)]).collect();
        let b: Vec<f64> = (0..n).map(|i| ss.b[(i, 0)]).collect();
        let mut phi = vec![0.0; n * n];
        let mut e = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            let col = rk4_step(&a, &b, 0.0, h, &e);
            for i in 0..n {
                phi[i * n + j] = col[i];
            }
            e[j] = 0.0;
        }
        let gamma = rk4_step(&a, &b, 1.0, h, &vec![0.0; n]);
        Self { n, phi, gamma }
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        if self.n == 0 {
            return;
        }
        for ((o, row), g) in out.iter_mut().zip(self.phi.chunks_exact(self.n)).zip(&self.gamma) {
            *o = row.iter().zip(x).map(|(p, q)| p * q).sum::<f64>() + g;
        }
    }
}

/// Unit-step response from zero initial state, classical RK4 at fixed step `cfg.dt`.
///
/// When any state or the output leaves `±blow_up_limit` the response is flagged as
/// diverged and every sample from then on is pinned to `±blow_up_limit`, with the
/// sign of the output at the moment of divergence.
pub fn simulate_step(ss: &StateSpace, cfg: &SimConfig) -> StepResponse {
    let count = cfg.sample_count();
    let limit = cfg.blow_up_limit;
    let n = ss.order();
    let c: Vec<f64> = (0..n).map(|j| ss.c[(0, j)]).collect();
    let output = |x: &[f64]| c.iter().zip(x).map(|(p, q)| p * q).sum::<f64>() + ss.d;

    let prop = Propagator::new(ss, cfg.dt);
    let mut x = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut values = Vec::with_capacity(count);
    let mut diverged_at = None;

    for k in 0..count {
        if k > 0 {
            prop.apply(&x, &mut next);
            std::mem::swap(&mut x, &mut next);
        }
        let z = output(&x);
        let out_of_range = |v: f64| !v.is_finite() || v.abs() > limit;
        if out_of_range(z) || x.iter().any(|&v| out_of_range(v)) {
            diverged_at = Some(k);
            let pinned = if z < 0.0 { -limit } else { limit };
            values.resize(count, pinned);
            break;
        }
        values.push(z);
    }

    StepResponse {
        dt: cfg.dt,
        t_max: cfg.t_max,
        values,
        diverged: diverged_at.is_some(),
        diverged_at,
    }
}
