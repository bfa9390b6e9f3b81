use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::unit_rng;
use crate::error::Result;
use crate::geometry::{individual_cost, Agent, Instance, Point};
use crate::mechanisms::Mechanism;

const COORDINATE_RANGE: (f64, f64) = (-10.0, 10.0);
const WEIGHT_RANGE: (f64, f64) = (1.0, 10.0);
const MAX_AGENTS: usize = 15;
const CONFIDENCES: [f64; 4] = [0.0, 0.25, 0.5, 0.75];
const GRID_SIDE: usize = 9;
const RANDOM_MISREPORTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzConfig {
    pub trials: usize,
    pub seed: u64,
    /// Cost decreases at or below this are attributed to rounding.
    pub tolerance: f64,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            trials: 10_000,
            seed: 0,
            tolerance: 1e-9,
        }
    }
}

/// A profitable misreport: agent `agent` lowers its cost by `gain`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub trial: usize,
    pub instance: Instance,
    pub agent: usize,
    pub misreport: Point,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzReport {
    pub mechanism: String,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub violations: Vec<Violation>,
    /// Largest cost decrease seen over all misreports (non-positive for a
    /// strategyproof mechanism).
    pub max_gain: f64,
}

fn random_point(rng: &mut impl Rng) -> Point {
    let (lo, hi) = COORDINATE_RANGE;
    Point::new(rng.gen_range(lo..=hi), rng.gen_range(lo..=hi))
}

fn random_instance(rng: &mut impl Rng) -> Result<Instance> {
    let n = rng.gen_range(1..=MAX_AGENTS);
    let agents = (0..n)
        .map(|_| {
            let p = random_point(rng);
            Agent::new(p, rng.gen_range(WEIGHT_RANGE.0..=WEIGHT_RANGE.1))
        })
        .collect::<Result<Vec<_>>>()?;
    let prediction = random_point(rng);
    let c = *CONFIDENCES.choose(rng).expect("nonempty");
    Instance::new(agents)?
        .with_prediction(prediction)?
        .with_confidence(c)
}

fn misreports(rng: &mut impl Rng) -> Vec<Point> {
    let (lo, hi) = COORDINATE_RANGE;
    let step = (hi - lo) / (GRID_SIDE - 1) as f64;
    let mut points: Vec<Point> = (0..GRID_SIDE)
        .flat_map(|i| (0..GRID_SIDE).map(move |j| Point::new(lo + i as f64 * step, lo + j as f64 * step)))
        .collect();
    points.extend((0..RANDOM_MISREPORTS).map(|_| random_point(rng)));
    points
}

/// One trial: the best misreport found for one randomly chosen agent.
fn run_trial(mechanism: &dyn Mechanism, seed: u64, trial: usize, tolerance: f64) -> Result<(f64, Option<Violation>)> {
    let mut rng = unit_rng(seed, trial as u64);
    let instance = random_instance(&mut rng)?;
    let agent = rng.gen_range(0..instance.len());
    let truth = instance.agents()[agent];
    let honest_cost = individual_cost(mechanism.place(&instance)?, &truth);

    let mut best: Option<(Point, f64)> = None;
    for misreport in misreports(&mut rng) {
        let lied = instance.with_report(agent, misreport)?;
        let gain = honest_cost - individual_cost(mechanism.place(&lied)?, &truth);
        if best.is_none_or(|(_, g)| gain > g) {
            best = Some((misreport, gain));
        }
    }
    let (misreport, gain) = best.expect("misreport set is nonempty");
    let violation = (gain > tolerance).then(|| Violation {
        trial,
        instance,
        agent,
        misreport,
        gain,
    });
    Ok((gain, violation))
}

/// Searches for profitable misreports against `mechanism`.
///
/// Each trial draws an instance with 1 to 15 agents in `[-10, 10]^2`,
/// weights in `[1, 10]`, confidence from `{0, 0.25, 0.5, 0.75}` and a random
/// prediction, then tries a 9x9 grid plus 32 random misreports for one agent.
/// Trials run in parallel on independent seeded streams, so the report only
/// depends on `config`.
pub fn fuzz_strategyproofness(mechanism: &dyn Mechanism, config: &FuzzConfig) -> Result<FuzzReport> {
    let outcomes = (0..config.trials)
        .into_par_iter()
        .map(|trial| run_trial(mechanism, config.seed, trial, config.tolerance))
        .collect::<Result<Vec<_>>>()?;
    let max_gain = outcomes
        .iter()
        .map(|(g, _)| *g)
        .fold(f64::NEG_INFINITY, f64::max);
    let violations = outcomes.into_iter().filter_map(|(_, v)| v).collect();
    Ok(FuzzReport {
        mechanism: mechanism.name().to_string(),
        trials: config.trials,
        seed: config.seed,
        tolerance: config.tolerance,
        violations,
        max_gain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanisms::{CoordinateMedian, CoordinateMedianWithPrediction, WeightedMean};

    fn config(trials: usize, seed: u64) -> FuzzConfig {
        FuzzConfig {
            trials,
            seed,
            tolerance: 1e-9,
        }
    }

    #[test]
    fn cmp_survives_fuzzing() {
        let report = fuzz_strategyproofness(&CoordinateMedianWithPrediction, &config(500, 7)).unwrap();
        assert!(report.violations.is_empty());
        assert!(report.max_gain <= 1e-9);
        let cm = fuzz_strategyproofness(&CoordinateMedian, &config(200, 7)).unwrap();
        assert!(cm.violations.is_empty());
    }

    #[test]
    fn weighted_mean_is_caught() {
        let report = fuzz_strategyproofness(&WeightedMean, &config(100, 7)).unwrap();
        assert!(!report.violations.is_empty());
        let v = &report.violations[0];
        assert!(v.gain > 1e-9);
        let lied = v.instance.with_report(v.agent, v.misreport).unwrap();
        let truth = v.instance.agents()[v.agent];
        let honest = individual_cost(WeightedMean.place(&v.instance).unwrap(), &truth);
        let dishonest = individual_cost(WeightedMean.place(&lied).unwrap(), &truth);
        assert!((honest - dishonest - v.gain).abs() < 1e-12);
    }

    #[test]
    fn same_seed_same_report() {
        let a = fuzz_strategyproofness(&WeightedMean, &config(50, 3)).unwrap();
        let b = fuzz_strategyproofness(&WeightedMean, &config(50, 3)).unwrap();
        assert_eq!(a, b);
    }
}
