use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    approximation_ratio, social_cost, Instance, Point, DEGENERATE_COST_EPSILON,
};
use crate::mechanisms::{cmp, phantom_count};
use crate::optimal::{geometric_median, geometric_median_grid, SolverConfig};

/// Where CMP's prediction comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PredictionMode {
    /// The prediction is the optimal location itself.
    Accurate,
    Fixed(Point),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub instance_id: String,
    pub c: f64,
    pub prediction_mode: PredictionMode,
    pub facility: Point,
    pub optimal: Point,
    pub mech_cost: f64,
    pub opt_cost: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub solver: SolverConfig,
    /// Cross-check the iterative optimum against the grid oracle for
    /// instances of at most this many agents. Zero disables the check.
    pub cross_check_max_agents: usize,
    pub grid_resolution: usize,
    pub grid_margin: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            solver: SolverConfig::default(),
            cross_check_max_agents: 12,
            grid_resolution: 128,
            grid_margin: 0.5,
        }
    }
}

impl EvalOptions {
    pub fn unchecked() -> Self {
        EvalOptions {
            cross_check_max_agents: 0,
            ..EvalOptions::default()
        }
    }
}

/// `⌊c·n⌋ / n`: the confidence CMP actually applies to `n` agents.
pub fn effective_confidence(n: usize, c: f64) -> f64 {
    phantom_count(n, c) as f64 / n as f64
}

/// Stable FNV-1a digest of the agents and prediction, as 16 hex digits.
pub fn instance_id(instance: &Instance) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |v: f64| {
        for byte in v.to_bits().to_le_bytes() {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    for a in instance.agents() {
        feed(a.location().x);
        feed(a.location().y);
        feed(a.weight());
    }
    if let Some(p) = instance.prediction() {
        feed(p.x);
        feed(p.y);
    }
    format!("{hash:016x}")
}

/// Runs CMP at confidence `c` and measures its approximation ratio.
pub fn evaluate(instance: &Instance, c: f64, mode: PredictionMode) -> Result<RatioReport> {
    evaluate_with(instance, c, mode, &EvalOptions::default())
}

pub fn evaluate_with(
    instance: &Instance,
    c: f64,
    mode: PredictionMode,
    options: &EvalOptions,
) -> Result<RatioReport> {
    let agents = instance.agents();
    let opt = geometric_median(agents, &options.solver)?;

    if agents.len() <= options.cross_check_max_agents {
        let grid = geometric_median_grid(agents, options.grid_margin, options.grid_resolution)?;
        let mean_weight = agents.iter().map(|a| a.weight()).sum::<f64>() / agents.len() as f64;
        let slack = grid.cell_diagonal() * mean_weight;
        let consistent = opt.cost <= grid.result.cost + DEGENERATE_COST_EPSILON
            && grid.result.cost <= opt.cost + slack;
        if !consistent {
            return Err(Error::OracleDisagreement {
                iterative: opt.cost,
                grid: grid.result.cost,
                slack,
            });
        }
    }

    let prediction = match mode {
        PredictionMode::Accurate => opt.location,
        PredictionMode::Fixed(p) => p,
    };
    let facility = cmp(agents, prediction, c)?.facility;
    let mech_cost = social_cost(facility, agents);
    let ratio = approximation_ratio(mech_cost, opt.cost, DEGENERATE_COST_EPSILON)?;
    Ok(RatioReport {
        instance_id: instance_id(instance),
        c,
        prediction_mode: mode,
        facility,
        optimal: opt.location,
        mech_cost,
        opt_cost: opt.cost,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::agents_from_triples;
    use approx::assert_relative_eq;

    fn tradeoff() -> Instance {
        Instance::new(
            agents_from_triples(&[(0.0, 1.0, 4.0), (-1.0, 0.0, 1.0), (1.0, 0.0, 1.0)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn accurate_low_confidence() {
        let r = evaluate(&tradeoff(), 0.2, PredictionMode::Accurate).unwrap();
        assert_eq!(r.facility, Point::ORIGIN);
        assert_relative_eq!(r.ratio, 3.0 / 2f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn fixed_half_prediction() {
        let r = evaluate(&tradeoff(), 0.7, PredictionMode::Fixed(Point::new(0.0, 0.5))).unwrap();
        assert_eq!(r.facility, Point::new(0.0, 0.5));
        assert_relative_eq!(
            r.ratio,
            (2.0 + 5f64.sqrt()) / (2.0 * 2f64.sqrt()),
            epsilon = 1e-9
        );
    }

    #[test]
    fn facility_at_optimum_has_unit_ratio() {
        let r = evaluate(&tradeoff(), 0.7, PredictionMode::Accurate).unwrap();
        assert_eq!(r.facility, r.optimal);
        assert_eq!(r.ratio, 1.0);
    }

    #[test]
    fn ids_are_stable_and_distinguish_instances() {
        let a = tradeoff();
        assert_eq!(instance_id(&a), instance_id(&a.clone()));
        let b = a.with_report(1, Point::new(-2.0, 0.0)).unwrap();
        assert_ne!(instance_id(&a), instance_id(&b));
    }

    #[test]
    fn effective_confidence_floors() {
        assert_eq!(effective_confidence(3, 0.5), 1.0 / 3.0);
        assert_eq!(effective_confidence(8, 0.5), 0.5);
        assert_eq!(effective_confidence(1, 0.75), 0.0);
    }
}
