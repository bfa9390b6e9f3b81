//! Membership checks for the structured worst-case families (CA, OA, COA).
//!
//! The prediction is the instance's own when present and the optimum
//! otherwise (the accurate-prediction setting). All checks return `false`
//! rather than an error when CMP cannot be evaluated.

use super::{cmp_outcome, near, LOCATION_TOLERANCE};
use crate::geometry::{Instance, Point};
use crate::mechanisms::cmp;

const TOP: Point = Point::new(0.0, 1.0);

/// Heavy agents exactly at `(0, 1)`, light agents at `(±x, 0)` for one
/// shared `x`, CMP at the origin and the optimum at `(0, 1)`.
pub fn is_coa_instance(instance: &Instance, c: f64) -> bool {
    let w_max = instance.max_weight();
    let w_min = instance.min_weight();
    let mut offset: Option<f64> = None;
    for agent in instance.agents() {
        let p = agent.location();
        if p == TOP {
            if agent.weight() != w_max {
                return false;
            }
            continue;
        }
        if p.y != 0.0 || agent.weight() != w_min {
            return false;
        }
        match offset {
            Some(x) if x != p.x.abs() => return false,
            _ => offset = Some(p.x.abs()),
        }
    }
    match cmp_outcome(instance, c) {
        Ok((facility, opt, _)) => facility == Point::ORIGIN && near(opt, TOP),
        Err(_) => false,
    }
}

/// CMP at the origin, optimum on the positive y-axis, every agent on an axis.
pub fn is_oa_instance(instance: &Instance, c: f64) -> bool {
    let Ok((facility, opt, _)) = cmp_outcome(instance, c) else {
        return false;
    };
    facility == Point::ORIGIN
        && opt.x.abs() <= LOCATION_TOLERANCE
        && opt.y > LOCATION_TOLERANCE
        && instance
            .agents()
            .iter()
            .all(|a| a.location().x == 0.0 || a.location().y == 0.0)
}

#[derive(Debug, Default)]
struct Cluster {
    offset: Option<f64>,
    count: usize,
}

impl Cluster {
    fn add(&mut self, offset: f64) -> bool {
        self.count += 1;
        match self.offset {
            Some(o) => o == offset,
            None => {
                self.offset = Some(offset);
                true
            }
        }
    }
}

/// Clusters-on-axes membership.
///
/// The "no move towards opt" condition is checked for `ε ∈ {0.1, …, 1.0}`
/// only, and agents already at the optimum are skipped there. Agents at the
/// origin join the left cluster with zero offset, or the bottom cluster if
/// the left one is taken.
pub fn is_ca_instance(instance: &Instance, c: f64) -> bool {
    let Ok((facility, opt, _)) = cmp_outcome(instance, c) else {
        return false;
    };
    if facility != Point::ORIGIN {
        return false;
    }
    if !(opt.x > LOCATION_TOLERANCE && opt.y >= opt.x - LOCATION_TOLERANCE) {
        return false;
    }
    let prediction = instance.prediction().unwrap_or(opt);

    for (index, agent) in instance.agents().iter().enumerate() {
        let p = agent.location();
        if near(p, opt) {
            continue;
        }
        for step in 1..=10 {
            let eps = step as f64 / 10.0;
            let moved = Point::new(p.x + eps * (opt.x - p.x), p.y + eps * (opt.y - p.y));
            let Ok(next) = instance.with_report(index, moved) else {
                return false;
            };
            match cmp(next.agents(), prediction, c) {
                Ok(out) if out.facility != facility => {}
                _ => return false,
            }
        }
    }

    let (mut left, mut right, mut bottom, mut top) = (
        Cluster::default(),
        Cluster::default(),
        Cluster::default(),
        Cluster::default(),
    );
    let mut at_opt = 0;
    for agent in instance.agents() {
        let p = agent.location();
        let consistent = if near(p, opt) {
            at_opt += 1;
            true
        } else if p == Point::ORIGIN {
            if left.offset.is_none_or(|o| o == 0.0) {
                left.add(0.0)
            } else {
                bottom.add(0.0)
            }
        } else if p.y == 0.0 {
            if p.x < 0.0 {
                left.add(-p.x)
            } else {
                right.add(p.x)
            }
        } else if p.x == 0.0 {
            if p.y < 0.0 {
                bottom.add(-p.y)
            } else {
                top.add(p.y)
            }
        } else {
            false
        };
        if !consistent {
            return false;
        }
    }

    let fewer_left = left.count < right.count + at_opt;
    let fewer_below = bottom.count < top.count + at_opt;
    let symmetric = |lo: &Cluster, hi: &Cluster, o: f64| match (lo.offset, hi.offset) {
        (Some(a), Some(b)) => ((o + a) - (b - o)).abs() <= LOCATION_TOLERANCE,
        _ => true,
    };
    fewer_left && fewer_below && symmetric(&left, &right, opt.x) && symmetric(&bottom, &top, opt.y)
}
