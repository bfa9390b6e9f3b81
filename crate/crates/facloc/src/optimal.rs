//! The optimal facility `o(P)`: the weighted geometric median.
//!
//! [`geometric_median`] is the production solver. [`geometric_median_grid`]
//! is an exhaustive grid search kept as an independent oracle; it shares only
//! the cost function with the iterative solver.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{social_cost, Agent, Point};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Threshold on the weighted-gradient norm (and on step length when
    /// stagnating).
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Radius within which an iterate is considered to sit on an agent.
    pub anchor_epsilon: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tolerance: 1e-10,
            max_iterations: 10_000,
            anchor_epsilon: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalResult {
    pub location: Point,
    pub cost: f64,
    pub iterations: usize,
    pub converged: bool,
    /// True when the location is an agent location certified optimal by the
    /// anchor test rather than by a vanishing gradient.
    pub anchored: bool,
}

/// Grid oracle output together with the effective cell geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridResult {
    pub result: OptimalResult,
    pub cell_width: f64,
    pub cell_height: f64,
}

impl GridResult {
    pub fn cell_diagonal(&self) -> f64 {
        self.cell_width.hypot(self.cell_height)
    }
}

/// Distinct locations with their accumulated weight.
fn collapse(agents: &[Agent]) -> Vec<(Point, f64)> {
    let mut sites: Vec<(Point, f64)> = Vec::new();
    for a in agents {
        let p = a.location();
        match sites.iter_mut().find(|(q, _)| *q == p) {
            Some((_, w)) => *w += a.weight(),
            None => sites.push((p, a.weight())),
        }
    }
    sites
}

/// Sum over agents not at `at` of `w_i * (p_i - at) / |p_i - at|`: the pull
/// the other agents exert on a facility placed at `at`.
fn residual_force(sites: &[(Point, f64)], at: Point) -> (f64, f64) {
    sites
        .iter()
        .filter(|(p, _)| *p != at)
        .fold((0.0, 0.0), |(fx, fy), (p, w)| {
            let d = at.distance(p);
            (fx + w * (p.x - at.x) / d, fy + w * (p.y - at.y) / d)
        })
}

/// Gradient of `sum_i w_i d(f, p_i)`, together with its Hessian.
fn gradient_and_hessian(sites: &[(Point, f64)], f: Point) -> ((f64, f64), [f64; 3]) {
    let mut g = (0.0, 0.0);
    let mut h = [0.0; 3];
    for (p, w) in sites {
        let dx = f.x - p.x;
        let dy = f.y - p.y;
        let d = dx.hypot(dy);
        if d == 0.0 {
            continue;
        }
        g.0 += w * dx / d;
        g.1 += w * dy / d;
        let s = w / (d * d * d);
        h[0] += s * dy * dy;
        h[1] -= s * dx * dy;
        h[2] += s * dx * dx;
    }
    (g, h)
}

/// Norm of `sum_i w_i (f - p_i) / d(f, p_i)`, skipping agents located at `f`.
pub fn weighted_gradient_norm(agents: &[Agent], f: Point) -> f64 {
    let (g, _) = gradient_and_hessian(&collapse(agents), f);
    g.0.hypot(g.1)
}

fn sum_cost(sites: &[(Point, f64)], f: Point) -> f64 {
    sites.iter().map(|(p, w)| w * f.distance(p)).sum()
}

fn weiszfeld_step(sites: &[(Point, f64)], f: Point) -> Point {
    let (mut nx, mut ny, mut den) = (0.0, 0.0, 0.0);
    for (p, w) in sites {
        let s = w / f.distance(p);
        nx += s * p.x;
        ny += s * p.y;
        den += s;
    }
    Point::new(nx / den, ny / den)
}

/// Weighted geometric median.
///
/// Every distinct agent location is first tested with the anchor optimality
/// condition (residual pull no larger than the weight sitting there); a
/// certified anchor is returned exactly. Otherwise the minimizer lies off
/// the agents and is found by Weiszfeld iterations from the weighted
/// centroid, with a Newton step taken whenever it improves on Weiszfeld.
pub fn geometric_median(agents: &[Agent], config: &SolverConfig) -> Result<OptimalResult> {
    if agents.is_empty() {
        return Err(Error::EmptyInstance);
    }
    let sites = collapse(agents);
    let finish = |location: Point, iterations, converged, anchored| OptimalResult {
        location,
        cost: social_cost(location, agents),
        iterations,
        converged,
        anchored,
    };

    if sites.len() == 1 {
        return Ok(finish(sites[0].0, 0, true, true));
    }

    let total_weight: f64 = sites.iter().map(|(_, w)| w).sum();
    let slack = 1e-12 * total_weight;
    let best_anchor = sites
        .iter()
        .filter(|(p, w)| {
            let (fx, fy) = residual_force(&sites, *p);
            fx.hypot(fy) <= w + slack
        })
        .map(|(p, _)| (*p, sum_cost(&sites, *p)))
        .min_by(|a, b| a.1.total_cmp(&b.1));
    if let Some((p, _)) = best_anchor {
        return Ok(finish(p, 0, true, true));
    }

    let mut f = Point::new(
        sites.iter().map(|(p, w)| w * p.x).sum::<f64>() / total_weight,
        sites.iter().map(|(p, w)| w * p.y).sum::<f64>() / total_weight,
    );
    for iteration in 1..=config.max_iterations {
        if let Some((p, w)) = sites
            .iter()
            .find(|(p, _)| f.distance(p) <= config.anchor_epsilon)
        {
            let (fx, fy) = residual_force(&sites, *p);
            let pull = fx.hypot(fy);
            if pull <= w + slack {
                return Ok(finish(*p, iteration, true, true));
            }
            f = Point::new(
                p.x + config.anchor_epsilon * fx / pull,
                p.y + config.anchor_epsilon * fy / pull,
            );
            continue;
        }

        let (g, h) = gradient_and_hessian(&sites, f);
        let gnorm = g.0.hypot(g.1);
        if gnorm <= config.tolerance {
            return Ok(finish(f, iteration, true, false));
        }

        let cost = sum_cost(&sites, f);
        let mut next = weiszfeld_step(&sites, f);
        let det = h[0] * h[2] - h[1] * h[1];
        if det > 0.0 {
            let newton = Point::new(
                f.x - (h[2] * g.0 - h[1] * g.1) / det,
                f.y - (h[0] * g.1 - h[1] * g.0) / det,
            );
            if newton.is_finite() {
                let newton_cost = sum_cost(&sites, newton);
                let (ng, _) = gradient_and_hessian(&sites, newton);
                let improves = newton_cost < sum_cost(&sites, next)
                    || (newton_cost <= cost * (1.0 + 4.0 * f64::EPSILON)
                        && ng.0.hypot(ng.1) < gnorm);
                if improves {
                    next = newton;
                }
            }
        }

        // Stalled at the rounding floor.
        if next == f {
            return Ok(finish(f, iteration, false, false));
        }
        f = next;
    }
    Ok(finish(f, config.max_iterations, false, false))
}

/// Exhaustive `resolution x resolution` grid search over the agents'
/// bounding box expanded by `margin` on every side. Grid lines include the
/// box edges. A degenerate (zero-width) axis collapses to a single line.
pub fn geometric_median_grid(agents: &[Agent], margin: f64, resolution: usize) -> Result<GridResult> {
    if agents.is_empty() {
        return Err(Error::EmptyInstance);
    }
    if resolution < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid resolution must be at least 2, got {resolution}"
        )));
    }
    let (mut lo, mut hi) = (
        Point::new(f64::INFINITY, f64::INFINITY),
        Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for a in agents {
        let p = a.location();
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let axis = |lo: f64, hi: f64| -> (Vec<f64>, f64) {
        let (lo, hi) = (lo - margin, hi + margin);
        if hi <= lo {
            return (vec![lo], 0.0);
        }
        let step = (hi - lo) / (resolution - 1) as f64;
        let mut ticks: Vec<f64> = (0..resolution).map(|i| lo + i as f64 * step).collect();
        ticks[resolution - 1] = hi;
        (ticks, step)
    };
    let (xs, cell_width) = axis(lo.x, hi.x);
    let (ys, cell_height) = axis(lo.y, hi.y);

    let mut best = (Point::new(xs[0], ys[0]), f64::INFINITY);
    for &y in &ys {
        for &x in &xs {
            let p = Point::new(x, y);
            let cost = social_cost(p, agents);
            if cost < best.1 {
                best = (p, cost);
            }
        }
    }
    Ok(GridResult {
        result: OptimalResult {
            location: best.0,
            cost: best.1,
            iterations: xs.len() * ys.len(),
            converged: true,
            anchored: false,
        },
        cell_width,
        cell_height,
    })
}
