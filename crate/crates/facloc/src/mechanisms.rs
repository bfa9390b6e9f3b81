//! Deterministic facility-placement mechanisms.
//!
//! CM takes the lower median of each coordinate. GCM does the same after
//! adding fixed phantom points. CMP is GCM with `⌊c·n⌋` phantom copies of
//! the prediction. None of them look at weights, which is what keeps them
//! strategyproof.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{lower_median, validate_confidence, Agent, Instance, Point};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MechanismOutput {
    pub facility: Point,
    pub phantom_count: usize,
    pub augmented_size: usize,
}

/// Absorbs rounding in `c * n` (e.g. `0.7 * 90 = 62.999...`) before flooring.
const PHANTOM_COUNT_SNAP: f64 = 1e-9;

/// Number of phantom copies CMP adds for `n` agents at confidence `c`.
pub fn phantom_count(n: usize, c: f64) -> usize {
    (c * n as f64 + PHANTOM_COUNT_SNAP).floor() as usize
}

fn coordinate_median(points: impl Iterator<Item = Point> + Clone) -> Result<Point> {
    let xs: Vec<f64> = points.clone().map(|p| p.x).collect();
    let ys: Vec<f64> = points.map(|p| p.y).collect();
    Ok(Point::new(lower_median(&xs)?, lower_median(&ys)?))
}

/// Coordinate-wise lower median of the reported locations.
pub fn cm(agents: &[Agent]) -> Result<MechanismOutput> {
    gcm(agents, &[])
}

/// CM over the agents together with the phantom points.
pub fn gcm(agents: &[Agent], phantoms: &[Point]) -> Result<MechanismOutput> {
    if agents.is_empty() {
        return Err(Error::EmptyInstance);
    }
    let points = agents
        .iter()
        .map(Agent::location)
        .chain(phantoms.iter().copied());
    Ok(MechanismOutput {
        facility: coordinate_median(points)?,
        phantom_count: phantoms.len(),
        augmented_size: agents.len() + phantoms.len(),
    })
}

/// Coordinate median with prediction.
pub fn cmp(agents: &[Agent], prediction: Point, c: f64) -> Result<MechanismOutput> {
    validate_confidence(c)?;
    if agents.is_empty() {
        return Err(Error::EmptyInstance);
    }
    let phantoms = vec![prediction; phantom_count(agents.len(), c)];
    gcm(agents, &phantoms)
}

/// A facility-placement rule over an instance.
///
/// Implementations read whatever they need from the instance (prediction,
/// confidence); the fuzzing and search harnesses only see this trait.
pub trait Mechanism: Sync {
    fn name(&self) -> &'static str;

    fn place(&self, instance: &Instance) -> Result<Point>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CoordinateMedian;

impl Mechanism for CoordinateMedian {
    fn name(&self) -> &'static str {
        "cm"
    }

    fn place(&self, instance: &Instance) -> Result<Point> {
        Ok(cm(instance.agents())?.facility)
    }
}

/// CMP driven by the instance's own prediction and confidence. A missing
/// confidence means `c = 0`; a missing prediction is only allowed then.
#[derive(Debug, Clone, Copy, Default)]
pub struct CoordinateMedianWithPrediction;

impl Mechanism for CoordinateMedianWithPrediction {
    fn name(&self) -> &'static str {
        "cmp"
    }

    fn place(&self, instance: &Instance) -> Result<Point> {
        let c = instance.confidence().unwrap_or(0.0);
        let prediction = match instance.prediction() {
            Some(p) => p,
            None if phantom_count(instance.len(), c) == 0 => Point::ORIGIN,
            None => return Err(Error::MissingPrediction),
        };
        Ok(cmp(instance.agents(), prediction, c)?.facility)
    }
}

/// Weighted mean of the reports. Not strategyproof; it exists so the fuzzer
/// has something to catch.
#[derive(Debug, Clone, Copy, Default)]
pub struct WeightedMean;

impl Mechanism for WeightedMean {
    fn name(&self) -> &'static str {
        "weighted-mean"
    }

    fn place(&self, instance: &Instance) -> Result<Point> {
        let agents = instance.agents();
        let total: f64 = agents.iter().map(Agent::weight).sum();
        let (sx, sy) = agents.iter().fold((0.0, 0.0), |(sx, sy), a| {
            (sx + a.weight() * a.location().x, sy + a.weight() * a.location().y)
        });
        Ok(Point::new(sx / total, sy / total))
    }
}
