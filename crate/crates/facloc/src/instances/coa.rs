use serde::Serialize;

use super::bounds::{bound, validate_weight_range, worst_x, BoundMode};
use super::cmp_outcome;
use crate::error::{Error, Result};
use crate::geometry::{validate_confidence, Agent, Instance, Point};

/// A weighted clusters-and-optimum-on-axes instance: heavy agents at
/// `(0, 1)`, light agents split evenly between `(±x, 0)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoaInstance {
    pub instance: Instance,
    pub worst_x: f64,
    pub mode: BoundMode,
    pub expected_ratio: f64,
    pub c: f64,
    pub w_min: f64,
    pub w_max: f64,
}

fn integral(value: f64) -> Option<usize> {
    let rounded = value.round();
    ((value - rounded).abs() <= 1e-9 && rounded >= 1.0).then_some(rounded as usize)
}

/// The COA instance on which CMP attains the closed-form bound for `mode`.
///
/// Consistency: `(1-c)n/2` agents at `(0,1)` with `w_max`, `(1+c)n/4` at
/// each of `(±x*, 0)` with `w_min`, accurate prediction `(0,1)`.
/// Robustness: `(1+c)n/2` at the top, `(1-c)n/4` per side, prediction at the
/// origin. Sizes that would need rounding are rejected.
pub fn coa_worst_instance(
    n: usize,
    c: f64,
    w_min: f64,
    w_max: f64,
    mode: BoundMode,
) -> Result<CoaInstance> {
    validate_confidence(c)?;
    validate_weight_range(w_min, w_max)?;
    let nf = n as f64;
    let (top, side, prediction) = match mode {
        BoundMode::Consistency => ((1.0 - c) * nf / 2.0, (1.0 + c) * nf / 4.0, Point::new(0.0, 1.0)),
        BoundMode::Robustness => ((1.0 + c) * nf / 2.0, (1.0 - c) * nf / 4.0, Point::ORIGIN),
    };
    let (Some(top), Some(side)) = (integral(top), integral(side)) else {
        return Err(Error::IncompatibleSize { n, c });
    };
    if top + 2 * side != n {
        return Err(Error::IncompatibleSize { n, c });
    }

    let x = worst_x(c, w_min, w_max, mode);
    let heavy = Agent::new(Point::new(0.0, 1.0), w_max)?;
    let left = Agent::new(Point::new(-x, 0.0), w_min)?;
    let right = Agent::new(Point::new(x, 0.0), w_min)?;
    let agents: Vec<Agent> = std::iter::repeat(heavy)
        .take(top)
        .chain(std::iter::repeat(left).take(side))
        .chain(std::iter::repeat(right).take(side))
        .collect();
    let instance = Instance::new(agents)?
        .with_prediction(prediction)?
        .with_confidence(c)?;
    Ok(CoaInstance {
        instance,
        worst_x: x,
        mode,
        expected_ratio: bound(c, w_min, w_max, mode)?,
        c,
        w_min,
        w_max,
    })
}

/// Smallest `n <= limit` for which [`coa_worst_instance`] accepts `c`.
pub fn smallest_compatible_n(c: f64, mode: BoundMode, limit: usize) -> Option<usize> {
    (1..=limit).find(|&n| coa_worst_instance(n, c, 1.0, 1.0, mode).is_ok())
}

/// Checks that moving any single agent's weight strictly inside
/// `(w_min, w_max)` lowers CMP's measured ratio on the instance.
///
/// Nine interior weights are sampled per agent. The prediction is held at
/// the instance's own prediction.
pub fn extremize_coa_weights(coa: &CoaInstance) -> Result<bool> {
    if coa.w_min == coa.w_max {
        return Ok(true);
    }
    let (_, _, baseline) = cmp_outcome(&coa.instance, coa.c)?;
    let agents = coa.instance.agents();
    for index in 0..agents.len() {
        for k in 1..10 {
            let w = coa.w_min + (coa.w_max - coa.w_min) * k as f64 / 10.0;
            let mut perturbed = agents.to_vec();
            perturbed[index] = perturbed[index].reweighted(w)?;
            let mut instance = Instance::new(perturbed)?.with_confidence(coa.c)?;
            if let Some(p) = coa.instance.prediction() {
                instance = instance.with_prediction(p)?;
            }
            let (_, _, ratio) = cmp_outcome(&instance, coa.c)?;
            if ratio >= baseline {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
