//! Closed-form consistency and robustness guarantees of CMP.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::validate_confidence;

/// Which guarantee an instance or search targets: consistency (accurate
/// prediction) or robustness (arbitrary prediction).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMode {
    Consistency,
    Robustness,
}

impl BoundMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundMode::Consistency => "consistency",
            BoundMode::Robustness => "robustness",
        }
    }
}

impl std::str::FromStr for BoundMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "consistency" => Ok(BoundMode::Consistency),
            "robustness" => Ok(BoundMode::Robustness),
            other => Err(Error::InvalidParameter(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundPair {
    pub c: f64,
    pub w_min: f64,
    pub w_max: f64,
    pub consistency: f64,
    pub robustness: f64,
}

pub(crate) fn validate_weight_range(w_min: f64, w_max: f64) -> Result<()> {
    if w_min.is_finite() && w_max.is_finite() && w_min > 0.0 && w_max >= w_min {
        Ok(())
    } else {
        Err(Error::InvalidWeightRange { w_min, w_max })
    }
}

/// Effective (axis-cluster, top-cluster) scale factors for a mode:
/// consistency uses `((1+c) w_min, (1-c) w_max)`, robustness swaps the signs.
fn scales(c: f64, w_min: f64, w_max: f64, mode: BoundMode) -> (f64, f64) {
    match mode {
        BoundMode::Consistency => ((1.0 + c) * w_min, (1.0 - c) * w_max),
        BoundMode::Robustness => ((1.0 - c) * w_min, (1.0 + c) * w_max),
    }
}

pub fn bound(c: f64, w_min: f64, w_max: f64, mode: BoundMode) -> Result<f64> {
    validate_confidence(c)?;
    validate_weight_range(w_min, w_max)?;
    let (axis, top) = scales(c, w_min, w_max, mode);
    Ok(axis.hypot(top) / axis)
}

/// `sqrt((1+c)^2 w_min^2 + (1-c)^2 w_max^2) / ((1+c) w_min)`
pub fn consistency_bound(c: f64, w_min: f64, w_max: f64) -> Result<f64> {
    bound(c, w_min, w_max, BoundMode::Consistency)
}

/// `sqrt((1-c)^2 w_min^2 + (1+c)^2 w_max^2) / ((1-c) w_min)`
pub fn robustness_bound(c: f64, w_min: f64, w_max: f64) -> Result<f64> {
    bound(c, w_min, w_max, BoundMode::Robustness)
}

pub fn bound_pair(c: f64, w_min: f64, w_max: f64) -> Result<BoundPair> {
    Ok(BoundPair {
        c,
        w_min,
        w_max,
        consistency: consistency_bound(c, w_min, w_max)?,
        robustness: robustness_bound(c, w_min, w_max)?,
    })
}

/// Approximation ratio of CMP on the two-parameter COA family with axis
/// clusters at `(±x, 0)`, assuming the optimum stays at `(0, 1)`.
pub fn coa_ratio(x: f64, c: f64, w_min: f64, w_max: f64, mode: BoundMode) -> f64 {
    let (axis, top) = scales(c, w_min, w_max, mode);
    (axis * x + top) / (axis * (1.0 + x * x).sqrt())
}

/// The maximizer of [`coa_ratio`] over `x`.
pub fn worst_x(c: f64, w_min: f64, w_max: f64, mode: BoundMode) -> f64 {
    let (axis, top) = scales(c, w_min, w_max, mode);
    axis / top
}
