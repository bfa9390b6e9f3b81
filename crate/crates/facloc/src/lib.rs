//! Strategyproof mechanisms for placing one facility among weighted agents
//! in the plane, optionally guided by a predicted optimal location.
//!
//! The crate provides the coordinate-median family (CM, GCM, CMP), the
//! weighted geometric median as the optimal benchmark, closed-form
//! consistency/robustness bounds with their worst-case instances, and
//! harnesses that check the guarantees empirically.

pub mod analysis;
pub mod error;
pub mod geometry;
pub mod instances;
pub mod mechanisms;
pub mod optimal;

pub use error::{Error, Result};
pub use geometry::{
    agents_from_triples, approximation_ratio, euclidean_distance, individual_cost, lower_median,
    utilitarian_cost, Agent, CostReport, Instance, Point, DEGENERATE_COST_EPSILON,
};
pub use mechanisms::{cm, cmp, gcm, Mechanism, MechanismOutput};
pub use optimal::{geometric_median, geometric_median_grid, OptimalResult, SolverConfig};
