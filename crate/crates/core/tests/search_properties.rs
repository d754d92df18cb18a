use std::cell::Cell;

use pidtune::lti::PidGains;
use pidtune::search::{optimize, SearchConfig, Termination};
use proptest::prelude::*;

/// Plain reference compass search: returns every evaluated point in order.
fn reference_compass(
    start: [f64; 3],
    f: &dyn Fn([f64; 3]) -> f64,
    step0: f64,
    shrink: f64,
    expand: f64,
    min_step: f64,
    budget: usize,
) -> Vec<[f64; 3]> {
    let mut evaluated = vec![start];
    let mut x = start;
    let mut fx = f(x);
    let mut best = fx;
    let mut step = step0;
    'outer: loop {
        let mut success = false;
        for axis in 0..3 {
            for sign in [1.0, -1.0] {
                if evaluated.len() == budget {
                    break 'outer;
                }
                let mut y = x;
                y[axis] += sign * step;
                let fy = f(y);
                evaluated.push(y);
                if fy < best {
                    best = fy;
                    x = y;
                    fx = fy;
                    step = f64::min(step * expand, step0);
                    success = true;
                    break;
                }
            }
            if success {
                break;
            }
        }
        if !success {
            step *= shrink;
            if step < min_step {
                break;
            }
        }
    }
    let _ = fx;
    evaluated
}

fn quadratic(c: [f64; 3], w: [f64; 3]) -> impl Fn([f64; 3]) -> f64 {
    move |x| (0..3).map(|i| w[i] * (x[i] - c[i]).powi(2)).sum()
}

#[test]
fn sphere_matches_reference_and_converges() {
    let cfg = SearchConfig::default();
    let f = quadratic([0.0; 3], [1.0; 3]);
    let trace = optimize(PidGains::from_array([1.0, 1.0, 1.0]), |g| f(g.to_array()), &cfg).unwrap();
    let reference = reference_compass([1.0; 3], &f, 1.0, 0.5, 2.0, 1e-6, 5000);
    let points: Vec<[f64; 3]> = trace.records.iter().map(|r| r.gains.to_array()).collect();
    assert_eq!(points, reference);
    assert!(trace.len() < 600);
    assert!(trace.incumbent_value < 1e-8);
    assert_eq!(trace.termination, Termination::StepConverged);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_invariants_on_random_quadratics(
        start in prop::array::uniform3(-5.0f64..5.0),
        centre in prop::array::uniform3(-5.0f64..5.0),
        weights in prop::array::uniform3(0.1f64..10.0),
        max_evals in 1usize..400,
    ) {
        let f = quadratic(centre, weights);
        let cfg = SearchConfig { max_evals, ..SearchConfig::default() };
        let calls = Cell::new(0usize);
        let trace = optimize(
            PidGains::from_array(start),
            |g| { calls.set(calls.get() + 1); f(g.to_array()) },
            &cfg,
        ).unwrap();

        // conservation of evaluations
        prop_assert_eq!(trace.len(), calls.get());
        prop_assert!(trace.len() <= max_evals);

        // contiguous indices, monotone best, flags re-derived post hoc
        let mut best = f64::INFINITY;
        for (i, r) in trace.records.iter().enumerate() {
            prop_assert_eq!(r.index, i + 1);
            let improved = i == 0 || r.objective < best;
            prop_assert_eq!(r.improved, improved);
            if improved { best = r.objective; }
            prop_assert_eq!(r.best_so_far, best);
        }
        let min = trace.records.iter().map(|r| r.objective).fold(f64::INFINITY, f64::min);
        prop_assert_eq!(trace.incumbent_value, min);

        // same points as the reference implementation
        let reference = reference_compass(start, &f, 1.0, 0.5, 2.0, 1e-6, max_evals);
        let points: Vec<[f64; 3]> = trace.records.iter().map(|r| r.gains.to_array()).collect();
        prop_assert_eq!(points, reference);

        // determinism
        let again = optimize(PidGains::from_array(start), |g| f(g.to_array()), &cfg).unwrap();
        prop_assert_eq!(&trace, &again);
    }
}

#[test]
fn expansion_is_capped_and_shrink_applies() {
    let cfg = SearchConfig {
        initial_step: 0.5,
        shrink: 0.25,
        expand: 3.0,
        min_step: 1e-3,
        max_evals: 10_000,
    };
    let f = quadratic([3.0, -2.0, 0.7], [1.0, 2.0, 0.5]);
    let trace = optimize(PidGains::from_array([0.0; 3]), |g| f(g.to_array()), &cfg).unwrap();
    let reference = reference_compass([0.0; 3], &f, 0.5, 0.25, 3.0, 1e-3, 10_000);
    let points: Vec<[f64; 3]> = trace.records.iter().map(|r| r.gains.to_array()).collect();
    assert_eq!(points, reference);
    // no step ever exceeds the initial step
    for w in trace.records.windows(2) {
        let d: f64 = (0..3)
            .map(|i| (w[1].gains.to_array()[i] - w[0].gains.to_array()[i]).abs())
            .fold(0.0, f64::max);
        assert!(d <= 2.0 * 0.5 + 1e-12);
    }
}
