//! Compass search over `[kp, ki, kd]` with opportunistic polling.
//!
//! Every call to the score function becomes one [`EvaluationRecord`], in call
//! order, so the trace doubles as the frame list of the animation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lti::PidGains;
use crate::objective::ObjectiveValue;

/// Anything the search can minimize.
pub trait Scored {
    fn total(&self) -> f64;
}

impl Scored for f64 {
    fn total(&self) -> f64 {
        *self
    }
}

impl Scored for ObjectiveValue {
    fn total(&self) -> f64 {
        self.total
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub initial_step: f64,
    pub shrink: f64,
    pub expand: f64,
    pub min_step: f64,
    pub max_evals: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            initial_step: 1.0,
            shrink: 0.5,
            expand: 2.0,
            min_step: 1e-6,
            max_evals: 5000,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.shrink > 0.0
            && self.shrink < 1.0
            && self.expand >= 1.0
            && self.min_step > 0.0
            && self.min_step < self.initial_step
            && self.initial_step.is_finite()
            && self.max_evals >= 1;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "need 0 < shrink < 1 <= expand, 0 < min_step < initial_step, max_evals >= 1; got {self:?}"
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord<V = ObjectiveValue> {
    /// 1-based position in the trace.
    pub index: usize,
    pub gains: PidGains,
    pub objective: V,
    /// Strictly better than every earlier record; true for the first record.
    pub improved: bool,
    pub best_so_far: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    StepConverged,
    BudgetExhausted,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::StepConverged => "step-converged",
            Termination::BudgetExhausted => "budget-exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchTrace<V = ObjectiveValue> {
    pub config: SearchConfig,
    pub records: Vec<EvaluationRecord<V>>,
    pub incumbent: PidGains,
    pub incumbent_value: V,
    pub termination: Termination,
}

impl<V> SearchTrace<V> {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Poll directions in their fixed order: +kp, -kp, +ki, -ki, +kd, -kd.
pub const POLL_DIRECTIONS: [[f64; 3]; 6] = [
    [1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0],
    [0.0, -1.0, 0.0],
    [0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0],
];

struct Recorder<V> {
    records: Vec<EvaluationRecord<V>>,
    best: f64,
}

impl<V: Scored> Recorder<V> {
    fn push(&mut self, gains: PidGains, objective: V) -> bool {
        let total = objective.total();
        let improved = self.records.is_empty() || total < self.best;
        if improved {
            self.best = total;
        }
        self.records.push(EvaluationRecord {
            index: self.records.len() + 1,
            gains,
            objective,
            improved,
            best_so_far: self.best,
        });
        improved
    }
}

/// Minimizes `score` from `start`.
///
/// A poll cycle tries the six coordinate moves in order and accepts the first
/// strictly better point, growing the step by `expand` (never past
/// `initial_step`) and starting a new cycle. A cycle without improvement
/// shrinks the step. The run ends once the step drops below `min_step` or
/// `max_evals` evaluations have been made.
pub fn optimize<V, F>(start: PidGains, mut score: F, cfg: &SearchConfig) -> Result<SearchTrace<V>>
where
    V: Scored + Clone,
    F: FnMut(PidGains) -> V,
{
    cfg.validate()?;
    let first = score(start);
    if !first.total().is_finite() {
        return Err(Error::NonFiniteStart(first.total()));
    }

    let mut rec = Recorder {
        records: Vec::new(),
        best: first.total(),
    };
    rec.push(start, first.clone());
    let mut incumbent = (start, first);
    let mut step = cfg.initial_step;

    let termination = 'search: loop {
        let mut moved = false;
        for dir in POLL_DIRECTIONS {
            if rec.records.len() >= cfg.max_evals {
                break 'search Termination::BudgetExhausted;
            }
            let x = incumbent.0.to_array();
            let trial = PidGains::from_array([
                x[0] + step * dir[0],
                x[1] + step * dir[1],
                x[2] + step * dir[2],
            ]);
            let value = score(trial);
            if rec.push(trial, value.clone()) {
                incumbent = (trial, value);
                step = (step * cfg.expand).min(cfg.initial_step);
                moved = true;
                break;
            }
        }
        if !moved {
            step *= cfg.shrink;
            if step < cfg.min_step {
                break Termination::StepConverged;
            }
        }
    };

    Ok(SearchTrace {
        config: *cfg,
        records: rec.records,
        incumbent: incumbent.0,
        incumbent_value: incumbent.1,
        termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(g: PidGains) -> f64 {
        g.kp * g.kp + g.ki * g.ki + g.kd * g.kd
    }

    #[test]
    fn sphere_converges_to_origin() {
        let start = PidGains::from_array([1.0, 1.0, 1.0]);
        let trace = optimize(start, sphere, &SearchConfig::default()).unwrap();
        assert_eq!(trace.termination, Termination::StepConverged);
        assert!(trace.len() < 600);
        assert!(trace.incumbent_value < 1e-8);
        for v in trace.incumbent.to_array() {
            assert!(v.abs() < 1e-4);
        }
    }

    #[test]
    fn constant_score_shrinks_to_convergence() {
        let start = PidGains::from_array([3.0, -1.0, 2.0]);
        let trace = optimize(start, |_| 7.0, &SearchConfig::default()).unwrap();
        assert_eq!(trace.incumbent, start);
        assert!(trace.records[0].improved);
        assert!(trace.records[1..].iter().all(|r| !r.improved));
        // ceil(log2(1 / 1e-6)) = 20 failed cycles of 6 polls
        assert_eq!(trace.len(), 1 + 6 * 20);
        assert_eq!(trace.termination, Termination::StepConverged);
    }

    #[test]
    fn budget_of_one() {
        let cfg = SearchConfig {
            max_evals: 1,
            ..SearchConfig::default()
        };
        let start = PidGains::from_array([1.0, 2.0, 3.0]);
        let trace = optimize(start, sphere, &cfg).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(trace.incumbent, start);
        assert_eq!(trace.termination, Termination::BudgetExhausted);
    }

    #[test]
    fn budget_is_exact() {
        let cfg = SearchConfig {
            max_evals: 17,
            ..SearchConfig::default()
        };
        let mut calls = 0;
        let trace = optimize(
            PidGains::from_array([5.0, 5.0, 5.0]),
            |g| {
                calls += 1;
                sphere(g)
            },
            &cfg,
        )
        .unwrap();
        assert_eq!(trace.len(), 17);
        assert_eq!(calls, 17);
        assert_eq!(trace.termination, Termination::BudgetExhausted);
    }

    #[test]
    fn poll_order_is_fixed() {
        // first poll +kp worsens, -kp improves
        let trace = optimize(PidGains::from_array([1.0, 0.0, 0.0]), sphere, &SearchConfig::default()).unwrap();
        assert_eq!(trace.records[1].gains.to_array(), [2.0, 0.0, 0.0]);
        assert!(!trace.records[1].improved);
        assert_eq!(trace.records[2].gains.to_array(), [0.0, 0.0, 0.0]);
        assert!(trace.records[2].improved);
        // after success the cycle restarts from +kp at the same (capped) step
        assert_eq!(trace.records[3].gains.to_array(), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn non_finite_start_is_rejected() {
        let r = optimize(PidGains::from_array([0.0; 3]), |_| f64::NAN, &SearchConfig::default());
        assert!(matches!(r, Err(Error::NonFiniteStart(_))));
    }

    #[test]
    fn invalid_config() {
        let cfg = SearchConfig {
            shrink: 1.0,
            ..SearchConfig::default()
        };
        assert!(optimize(PidGains::from_array([0.0; 3]), sphere, &cfg).is_err());
    }

    #[test]
    fn ties_are_not_improvements() {
        // flat in kp, so +kp and -kp tie with the start
        let trace = optimize(
            PidGains::from_array([0.0, 0.0, 0.0]),
            |g| g.ki.abs() + g.kd.abs(),
            &SearchConfig::default(),
        )
        .unwrap();
        assert!(trace.records.iter().skip(1).all(|r| !r.improved));
    }
}
