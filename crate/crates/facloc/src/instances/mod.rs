//! Bound evaluators, worst-case instance generators and the structural
//! family checkers used when reasoning about worst cases.

mod bounds;
mod coa;
mod families;
mod impossibility;

pub use bounds::{
    bound, bound_pair, coa_ratio, consistency_bound, robustness_bound, worst_x, BoundMode,
    BoundPair,
};
pub use coa::{coa_worst_instance, extremize_coa_weights, smallest_compatible_n, CoaInstance};
pub use families::{is_ca_instance, is_coa_instance, is_oa_instance};
pub use impossibility::{
    constant_point_ratios, impossibility_family, impossibility_instances, impossibility_ratio,
    ConstantPointOutcome,
};

use crate::error::Result;
use crate::geometry::{approximation_ratio, social_cost, Instance, Point, DEGENERATE_COST_EPSILON};
use crate::mechanisms::cmp;
use crate::optimal::{geometric_median, SolverConfig};

/// Tolerance for treating a computed location as exactly a target point.
pub(crate) const LOCATION_TOLERANCE: f64 = 1e-9;

pub(crate) fn near(a: Point, b: Point) -> bool {
    a.distance(&b) <= LOCATION_TOLERANCE
}

/// CMP facility and optimum for `instance`. The prediction is the
/// instance's own, or the optimum itself when none is attached.
pub(crate) fn cmp_outcome(instance: &Instance, c: f64) -> Result<(Point, Point, f64)> {
    let opt = geometric_median(instance.agents(), &SolverConfig::default())?;
    let prediction = instance.prediction().unwrap_or(opt.location);
    let facility = cmp(instance.agents(), prediction, c)?.facility;
    let ratio = approximation_ratio(
        social_cost(facility, instance.agents()),
        opt.cost,
        DEGENERATE_COST_EPSILON,
    )?;
    Ok((facility, opt.location, ratio))
}
