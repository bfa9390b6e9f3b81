//! The two-instance construction showing that perfect consistency forces
//! robustness growing like `(n - 1) * w_max / w_min`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    approximation_ratio, social_cost, Agent, Instance, Point, DEGENERATE_COST_EPSILON,
};
use crate::mechanisms::gcm;
use crate::optimal::{geometric_median, SolverConfig};

const LOW: Point = Point::new(0.0, 10.0);
const HIGH: Point = Point::new(0.0, 20.0);

/// `n - 1` agents at `(0, 10)` with weight `w_low`, one at `(0, 20)` with
/// weight `w_high`.
fn two_cluster(n: usize, w_low: f64, w_high: f64) -> Result<Instance> {
    let low = Agent::new(LOW, w_low)?;
    let mut agents = vec![low; n - 1];
    agents.push(Agent::new(HIGH, w_high)?);
    Instance::new(agents)
}

/// Instance A (four unit agents at `(0,10)`, weight 5 at `(0,20)`) and
/// Instance B (weights swapped).
pub fn impossibility_instances() -> (Instance, Instance) {
    let a = two_cluster(5, 1.0, 5.0).expect("valid fixed instance");
    let b = two_cluster(5, 5.0, 1.0).expect("valid fixed instance");
    (a, b)
}

/// The generalized B-type instance: `n - 1` heavy agents at `(0, 10)` and one
/// light agent at `(0, 20)`.
pub fn impossibility_family(n: usize, w_min: f64, w_max: f64) -> Result<Instance> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    two_cluster(n, w_max, w_min)
}

/// `(n - 1) * w_max / w_min`.
pub fn impossibility_ratio(n: usize, w_min: f64, w_max: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    super::bounds::validate_weight_range(w_min, w_max)?;
    Ok((n - 1) as f64 * w_max / w_min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantPointOutcome {
    pub facility: Point,
    pub optimal: Point,
    pub ratio: f64,
}

/// GCM with `n - 1` constant points at `constant`, evaluated on `instance`.
pub fn constant_point_ratios(instance: &Instance, constant: Point) -> Result<ConstantPointOutcome> {
    let phantoms = vec![constant; instance.len().saturating_sub(1)];
    let facility = gcm(instance.agents(), &phantoms)?.facility;
    let opt = geometric_median(instance.agents(), &SolverConfig::default())?;
    let ratio = approximation_ratio(
        social_cost(facility, instance.agents()),
        opt.cost,
        DEGENERATE_COST_EPSILON,
    )?;
    Ok(ConstantPointOutcome {
        facility,
        optimal: opt.location,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn optima_of_the_pair() {
        let (a, b) = impossibility_instances();
        let cfg = SolverConfig::default();
        assert_eq!(geometric_median(a.agents(), &cfg).unwrap().location, HIGH);
        assert_eq!(geometric_median(b.agents(), &cfg).unwrap().location, LOW);
    }

    #[test]
    fn high_constant_points_are_consistent_on_a_but_not_robust_on_b() {
        let (a, b) = impossibility_instances();
        let above = Point::new(0.0, 21.0);
        let on_a = constant_point_ratios(&a, above).unwrap();
        assert_eq!(on_a.facility, HIGH);
        assert_relative_eq!(on_a.ratio, 1.0, epsilon = 1e-12);
        let on_b = constant_point_ratios(&b, above).unwrap();
        assert_eq!(on_b.facility, HIGH);
        assert_relative_eq!(on_b.ratio, 20.0, epsilon = 1e-9);
    }

    #[test]
    fn low_constant_points_lose_consistency_on_a() {
        let (a, _) = impossibility_instances();
        let out = constant_point_ratios(&a, Point::new(0.0, 0.0)).unwrap();
        assert_eq!(out.facility, LOW);
        assert_relative_eq!(out.ratio, 1.25, epsilon = 1e-12);
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(impossibility_ratio(5, 1.0, 5.0).unwrap(), 20.0);
        assert_eq!(impossibility_ratio(2, 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(impossibility_ratio(10, 1.0, 3.0).unwrap(), 27.0);
        assert!(impossibility_ratio(1, 1.0, 1.0).is_err());
    }

    #[test]
    fn family_evaluates_to_the_scaling_ratio() {
        let inst = impossibility_family(10, 1.0, 3.0).unwrap();
        let out = constant_point_ratios(&inst, Point::new(0.0, 21.0)).unwrap();
        assert_eq!(out.facility, HIGH);
        assert_relative_eq!(out.ratio, 27.0, epsilon = 1e-9);
    }
}
