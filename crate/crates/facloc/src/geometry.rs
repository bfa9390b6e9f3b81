//! Domain types and the cost primitives every mechanism and solver shares.
//!
//! Costs follow the averaged utilitarian form: the social cost of a facility
//! `f` is `(1/n) * sum_i w_i * d(f, p_i)`. Weights are public, so they enter
//! costs but never facility placement.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute threshold below which an optimal cost counts as zero.
pub const DEGENERATE_COST_EPSILON: f64 = 1e-9;

/// A location in the Euclidean plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Builds a point, rejecting NaN and infinite coordinates.
    pub fn checked(x: f64, y: f64) -> Result<Self> {
        let p = Point { x, y };
        p.validate()?;
        Ok(p)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFiniteCoordinate {
                x: self.x,
                y: self.y,
            })
        }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        euclidean_distance(*self, *other)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

/// A reported location together with the agent's public weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Agent {
    location: Point,
    weight: f64,
}

impl Agent {
    pub fn new(location: Point, weight: f64) -> Result<Self> {
        location.validate()?;
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::InvalidWeight(weight));
        }
        Ok(Agent { location, weight })
    }

    pub fn location(&self) -> Point {
        self.location
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Same weight, different reported location.
    pub fn relocated(&self, location: Point) -> Result<Self> {
        Agent::new(location, self.weight)
    }

    /// Same location, different weight.
    pub fn reweighted(&self, weight: f64) -> Result<Self> {
        Agent::new(self.location, weight)
    }
}

/// Convenience constructor for `(x, y, w)` triples.
pub fn agents_from_triples(triples: &[(f64, f64, f64)]) -> Result<Vec<Agent>> {
    triples
        .iter()
        .map(|&(x, y, w)| Agent::new(Point::new(x, y), w))
        .collect()
}

/// An agent multiset with an optional prediction `ô` and confidence `c`.
///
/// Duplicate locations are allowed; the order of agents is preserved but no
/// operation depends on it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance {
    agents: Vec<Agent>,
    prediction: Option<Point>,
    confidence: Option<f64>,
}

impl Instance {
    pub fn new(agents: Vec<Agent>) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::EmptyInstance);
        }
        Ok(Instance {
            agents,
            prediction: None,
            confidence: None,
        })
    }

    pub fn with_prediction(mut self, prediction: Point) -> Result<Self> {
        prediction.validate()?;
        self.prediction = Some(prediction);
        Ok(self)
    }

    pub fn with_confidence(mut self, c: f64) -> Result<Self> {
        validate_confidence(c)?;
        self.confidence = Some(c);
        Ok(self)
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn prediction(&self) -> Option<Point> {
        self.prediction
    }

    pub fn confidence(&self) -> Option<f64> {
        self.confidence
    }

    pub fn min_weight(&self) -> f64 {
        self.agents
            .iter()
            .map(Agent::weight)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_weight(&self) -> f64 {
        self.agents.iter().map(Agent::weight).fold(0.0, f64::max)
    }

    /// Returns a copy where agent `index` reports `location` instead.
    pub fn with_report(&self, index: usize, location: Point) -> Result<Self> {
        let mut next = self.clone();
        let agent = next
            .agents
            .get_mut(index)
            .ok_or_else(|| Error::InvalidParameter(format!("agent index {index} out of range")))?;
        *agent = agent.relocated(location)?;
        Ok(next)
    }
}

pub(crate) fn validate_confidence(c: f64) -> Result<()> {
    if (0.0..1.0).contains(&c) {
        Ok(())
    } else {
        Err(Error::InvalidConfidence(c))
    }
}

/// Facility location with its social cost and each agent's individual cost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostReport {
    pub facility: Point,
    pub total_cost: f64,
    pub per_agent: Vec<f64>,
}

pub fn euclidean_distance(a: Point, b: Point) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

/// `w * d(f, p)` for a single agent.
pub fn individual_cost(facility: Point, agent: &Agent) -> f64 {
    agent.weight * euclidean_distance(facility, agent.location)
}

/// Average weighted distance from `facility` to the agents.
pub fn utilitarian_cost(facility: Point, agents: &[Agent]) -> Result<CostReport> {
    if agents.is_empty() {
        return Err(Error::EmptyInstance);
    }
    let per_agent: Vec<f64> = agents.iter().map(|a| individual_cost(facility, a)).collect();
    let total_cost = per_agent.iter().sum::<f64>() / agents.len() as f64;
    Ok(CostReport {
        facility,
        total_cost,
        per_agent,
    })
}

/// Social cost only, for hot loops that do not need the per-agent breakdown.
pub(crate) fn social_cost(facility: Point, agents: &[Agent]) -> f64 {
    agents.iter().map(|a| individual_cost(facility, a)).sum::<f64>() / agents.len() as f64
}

/// The smaller of the two middle order statistics (the middle one for odd
/// counts): 0-based index `(k - 1) / 2` after sorting.
pub fn lower_median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyValues);
    }
    let mut sorted = values.to_vec();
    let index = (sorted.len() - 1) / 2;
    let (_, median, _) = sorted.select_nth_unstable_by(index, f64::total_cmp);
    Ok(*median)
}

/// Ratio of mechanism cost to optimal cost.
///
/// Returns 1 when the optimal cost is below `epsilon` (all agents coincide),
/// and fails when the mechanism appears to beat the optimum, which means the
/// denominator was not actually optimal.
pub fn approximation_ratio(mech_cost: f64, opt_cost: f64, epsilon: f64) -> Result<f64> {
    if mech_cost < opt_cost - epsilon {
        return Err(Error::OptimalSolverFailed {
            mech_cost,
            opt_cost,
        });
    }
    if opt_cost < epsilon {
        return Ok(1.0);
    }
    Ok(mech_cost / opt_cost)
}
