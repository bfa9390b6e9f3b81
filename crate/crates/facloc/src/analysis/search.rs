use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::evaluate::{effective_confidence, evaluate, evaluate_with, EvalOptions, PredictionMode, RatioReport};
use super::unit_rng;
use crate::error::{Error, Result};
use crate::geometry::{validate_confidence, Agent, Instance, Point};
use crate::instances::{bound, BoundMode};

/// Initial perturbation radius as a fraction of the box width.
const INITIAL_RADIUS: f64 = 0.1;
/// Consecutive rejected moves before the radius is halved.
const FAILURE_STREAK: usize = 20;
const MIN_RADIUS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub seed: u64,
    pub restarts: usize,
    pub steps_per_restart: usize,
    /// Inclusive range for the number of agents in random restarts.
    pub n_range: (usize, usize),
    pub coordinate_box: (f64, f64),
    pub weight_box: (f64, f64),
    pub c: f64,
    pub mode: BoundMode,
    /// Starting point for restart 0 instead of a random draw.
    pub seed_instance: Option<Instance>,
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        validate_confidence(self.c)?;
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.to_string()));
        if self.restarts == 0 {
            return bad("restarts must be positive");
        }
        let (n_lo, n_hi) = self.n_range;
        if n_lo == 0 || n_lo > n_hi {
            return bad("n_range must satisfy 1 <= lo <= hi");
        }
        let (lo, hi) = self.coordinate_box;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return bad("coordinate box must be a nonempty finite interval");
        }
        let (w_lo, w_hi) = self.weight_box;
        if !(w_lo.is_finite() && w_hi.is_finite() && w_lo > 0.0 && w_lo <= w_hi) {
            return bad("weight box must satisfy 0 < lo <= hi");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub mode: BoundMode,
    pub c: f64,
    pub best_instance: Instance,
    pub best: RatioReport,
    /// Closed-form bound for the best instance's own weights and effective
    /// confidence.
    pub best_bound: f64,
    /// Largest `ratio - bound` over every instance evaluated.
    pub max_excess: f64,
    pub evaluations: usize,
    pub restart_best: Vec<f64>,
}

#[derive(Debug, Clone)]
struct Candidate {
    points: Vec<Point>,
    weights: Vec<f64>,
    prediction: Point,
}

impl Candidate {
    fn random(rng: &mut impl Rng, config: &SearchConfig) -> Self {
        let n = rng.gen_range(config.n_range.0..=config.n_range.1);
        let (lo, hi) = config.coordinate_box;
        let (w_lo, w_hi) = config.weight_box;
        let point = |rng: &mut _| Point::new(uniform(rng, lo, hi), uniform(rng, lo, hi));
        let points = (0..n).map(|_| point(rng)).collect();
        let weights = (0..n).map(|_| uniform(rng, w_lo, w_hi)).collect();
        Candidate {
            points,
            weights,
            prediction: point(rng),
        }
    }

    fn from_instance(instance: &Instance) -> Self {
        Candidate {
            points: instance.agents().iter().map(Agent::location).collect(),
            weights: instance.agents().iter().map(Agent::weight).collect(),
            prediction: instance.prediction().unwrap_or(Point::ORIGIN),
        }
    }

    fn to_instance(&self, mode: BoundMode) -> Result<Instance> {
        let agents = self
            .points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| Agent::new(*p, *w))
            .collect::<Result<Vec<_>>>()?;
        let instance = Instance::new(agents)?;
        match mode {
            BoundMode::Consistency => Ok(instance),
            BoundMode::Robustness => instance.with_prediction(self.prediction),
        }
    }

    /// Moves one randomly chosen coordinate, weight or prediction component.
    fn perturb(&mut self, rng: &mut impl Rng, radius: f64, config: &SearchConfig) {
        let n = self.points.len();
        let (lo, hi) = config.coordinate_box;
        let (w_lo, w_hi) = config.weight_box;
        let weight_dims = if w_hi > w_lo { n } else { 0 };
        let prediction_dims = if config.mode == BoundMode::Robustness { 2 } else { 0 };
        let dim = rng.gen_range(0..2 * n + weight_dims + prediction_dims);
        let shift = |rng: &mut _, v: f64, lo: f64, hi: f64| {
            (v + uniform(rng, -1.0, 1.0) * radius * (hi - lo)).clamp(lo, hi)
        };
        if dim < 2 * n {
            let p = &mut self.points[dim / 2];
            if dim % 2 == 0 {
                p.x = shift(rng, p.x, lo, hi);
            } else {
                p.y = shift(rng, p.y, lo, hi);
            }
        } else if dim < 2 * n + weight_dims {
            let w = &mut self.weights[dim - 2 * n];
            *w = shift(rng, *w, w_lo, w_hi);
        } else if dim == 2 * n + weight_dims {
            self.prediction.x = shift(rng, self.prediction.x, lo, hi);
        } else {
            self.prediction.y = shift(rng, self.prediction.y, lo, hi);
        }
    }
}

fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.gen_range(lo..=hi)
    } else {
        lo
    }
}

struct Scored {
    ratio: f64,
    excess: f64,
}

fn prediction_mode(instance: &Instance, mode: BoundMode) -> PredictionMode {
    match (mode, instance.prediction()) {
        (BoundMode::Robustness, Some(p)) => PredictionMode::Fixed(p),
        _ => PredictionMode::Accurate,
    }
}

fn instance_bound(instance: &Instance, c: f64, mode: BoundMode) -> Result<f64> {
    let c_eff = effective_confidence(instance.len(), c);
    bound(c_eff, instance.min_weight(), instance.max_weight(), mode)
}

fn score(candidate: &Candidate, config: &SearchConfig) -> Result<Scored> {
    let instance = candidate.to_instance(config.mode)?;
    let report = evaluate_with(
        &instance,
        config.c,
        prediction_mode(&instance, config.mode),
        &EvalOptions::unchecked(),
    )?;
    let bound = instance_bound(&instance, config.c, config.mode)?;
    Ok(Scored {
        ratio: report.ratio,
        excess: report.ratio - bound,
    })
}

struct RestartOutcome {
    best: Candidate,
    best_ratio: f64,
    max_excess: f64,
    evaluations: usize,
}

fn run_restart(config: &SearchConfig, restart: usize) -> Result<RestartOutcome> {
    let mut rng = unit_rng(config.seed, restart as u64);
    let mut current = match (&config.seed_instance, restart) {
        (Some(seed), 0) => Candidate::from_instance(seed),
        _ => Candidate::random(&mut rng, config),
    };
    let mut current_score = score(&current, config)?;
    let mut outcome = RestartOutcome {
        best: current.clone(),
        best_ratio: current_score.ratio,
        max_excess: current_score.excess,
        evaluations: 1,
    };
    let mut radius = INITIAL_RADIUS;
    let mut streak = 0;
    for _ in 0..config.steps_per_restart {
        let mut next = current.clone();
        next.perturb(&mut rng, radius, config);
        let s = score(&next, config)?;
        outcome.evaluations += 1;
        outcome.max_excess = outcome.max_excess.max(s.excess);
        if s.ratio >= current_score.ratio {
            if s.ratio > outcome.best_ratio {
                outcome.best = next.clone();
                outcome.best_ratio = s.ratio;
            }
            current = next;
            current_score = s;
            streak = 0;
        } else {
            streak += 1;
            if streak >= FAILURE_STREAK {
                radius = (radius / 2.0).max(MIN_RADIUS);
                streak = 0;
            }
        }
    }
    Ok(outcome)
}

/// Hill-climbs CMP's approximation ratio from random restarts.
///
/// Consistency mode uses the accurate prediction (the optimum of each
/// candidate); robustness mode searches over the prediction as well. Every
/// evaluated instance is compared with the closed-form bound at its own
/// weight range and effective confidence `⌊c·n⌋/n`. Restarts run in parallel
/// on independent seeded streams; the result depends only on `config`.
pub fn adversarial_search(config: &SearchConfig) -> Result<SearchReport> {
    config.validate()?;
    let outcomes = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(config, r))
        .collect::<Result<Vec<_>>>()?;

    let mut best_index = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.best_ratio > outcomes[best_index].best_ratio {
            best_index = i;
        }
    }
    let best_instance = outcomes[best_index].best.to_instance(config.mode)?;
    let best = evaluate(
        &best_instance,
        config.c,
        prediction_mode(&best_instance, config.mode),
    )?;
    let best_bound = instance_bound(&best_instance, config.c, config.mode)?;
    Ok(SearchReport {
        mode: config.mode,
        c: config.c,
        best_bound,
        max_excess: outcomes
            .iter()
            .map(|o| o.max_excess)
            .fold(f64::NEG_INFINITY, f64::max),
        evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
        restart_best: outcomes.iter().map(|o| o.best_ratio).collect(),
        best_instance,
        best,
    })
}
