//! Independent oracles: 1-D grid maximization for the closed-form bounds and
//! exhaustive grid search for the optimal facility.

use facloc::instances::{bound, coa_ratio, worst_x, BoundMode};
use facloc::optimal::{geometric_median, geometric_median_grid, weighted_gradient_norm, SolverConfig};
use facloc::{agents_from_triples, Agent, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Maximizes the COA ratio on `x = step, 2*step, ..., upper` by brute force.
fn grid_maximize(c: f64, w_min: f64, w_max: f64, mode: BoundMode, upper: f64, step: f64) -> (f64, f64) {
    let steps = (upper / step).round() as usize;
    (1..=steps)
        .map(|k| {
            let x = k as f64 * step;
            (x, coa_ratio(x, c, w_min, w_max, mode))
        })
        .fold((0.0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
}

#[test]
fn frozen_bound_values_match_the_one_dimensional_oracle() {
    // Values computed with a step-1e-6 scan over (0, 10] and frozen here.
    let cases = [
        (0.5, 1.0, 1.0, BoundMode::Consistency, 1.0540925533894598),
        (0.0, 1.0, 2.0, BoundMode::Consistency, 2.23606797749979),
        (0.5, 1.0, 1.0, BoundMode::Robustness, 3.1622776601682374),
        (0.0, 1.0, 2.0, BoundMode::Robustness, 2.23606797749979),
        (0.5, 1.0, 2.0, BoundMode::Consistency, 1.2018504251546631),
        (0.5, 1.0, 2.0, BoundMode::Robustness, 6.0827625302979005),
    ];
    for (c, w_min, w_max, mode, frozen) in cases {
        let closed = bound(c, w_min, w_max, mode).unwrap();
        assert!((closed - frozen).abs() < 1e-9, "{c} {w_max} {mode:?}: {closed} vs {frozen}");
        let (_, scanned) = grid_maximize(c, w_min, w_max, mode, 10.0, 1e-4);
        assert!((closed - scanned).abs() < 1e-6);
    }
}

#[test]
fn bound_tightness_on_a_coarse_parameter_grid() {
    for mode in [BoundMode::Consistency, BoundMode::Robustness] {
        for c in [0.0, 0.2, 0.4, 0.6] {
            for w_max in [1.0, 2.0, 5.0] {
                let x_star = worst_x(c, 1.0, w_max, mode);
                assert!(x_star <= 10.0);
                let (argmax, max) = grid_maximize(c, 1.0, w_max, mode, 10.0, 1e-4);
                let closed = bound(c, 1.0, w_max, mode).unwrap();
                assert!((max - closed).abs() < 1e-6, "{mode:?} c={c} w={w_max}");
                assert!((argmax - x_star).abs() < 1e-3, "{mode:?} c={c} w={w_max}: {argmax} vs {x_star}");
            }
        }
    }
}

#[test]
fn segment_cost_matches_grid_oracle() {
    let agents = agents_from_triples(&[(0.0, 0.0, 1.0), (2.0, 0.0, 1.0)]).unwrap();
    // margin 1 on the bounding box gives [-1, 3] x [-1, 1].
    let grid = geometric_median_grid(&agents, 1.0, 401).unwrap();
    assert!((grid.result.cost - 1.0).abs() < 1e-12);
    let iterative = geometric_median(&agents, &SolverConfig::default()).unwrap();
    assert!((iterative.cost - 1.0).abs() < 1e-12);
}

fn random_agents(rng: &mut ChaCha8Rng) -> Vec<Agent> {
    let n = rng.gen_range(1..=12);
    (0..n)
        .map(|_| {
            Agent::new(
                Point::new(rng.gen_range(-5.0..=5.0), rng.gen_range(-5.0..=5.0)),
                rng.gen_range(1.0..=10.0),
            )
            .unwrap()
        })
        .collect()
}

#[test]
fn iterative_solver_is_dominated_by_grid_within_one_cell() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cfg = SolverConfig::default();
    for _ in 0..100 {
        let agents = random_agents(&mut rng);
        let it = geometric_median(&agents, &cfg).unwrap();
        let grid = geometric_median_grid(&agents, 0.5, 96).unwrap();
        let mean_w = agents.iter().map(Agent::weight).sum::<f64>() / agents.len() as f64;
        assert!(it.cost <= grid.result.cost + 1e-9);
        assert!(grid.result.cost <= it.cost + grid.cell_diagonal() * mean_w);
        assert!(it.converged);
        if !it.anchored {
            assert!(weighted_gradient_norm(&agents, it.location) <= cfg.tolerance);
        }
    }
}
