use super::evaluate::{evaluate, PredictionMode, RatioReport};
use crate::error::{Error, Result};
use crate::geometry::Instance;
use crate::instances::{bound_pair, BoundPair};

/// Evaluates CMP on `instance` for every prediction and confidence pair,
/// predictions outermost.
pub fn tradeoff_sweep(
    instance: &Instance,
    predictions: &[PredictionMode],
    c_grid: &[f64],
) -> Result<Vec<RatioReport>> {
    if predictions.is_empty() || c_grid.is_empty() {
        return Err(Error::InvalidParameter("empty sweep grid".into()));
    }
    predictions
        .iter()
        .flat_map(|&mode| c_grid.iter().map(move |&c| evaluate(instance, c, mode)))
        .collect()
}

/// Both bounds over `c_grid x weight_ratio_grid` with `w_min = 1`.
pub fn frontier(c_grid: &[f64], weight_ratio_grid: &[f64]) -> Result<Vec<BoundPair>> {
    if c_grid.is_empty() || weight_ratio_grid.is_empty() {
        return Err(Error::InvalidParameter("empty frontier grid".into()));
    }
    weight_ratio_grid
        .iter()
        .flat_map(|&ratio| c_grid.iter().map(move |&c| bound_pair(c, 1.0, ratio)))
        .collect()
}
