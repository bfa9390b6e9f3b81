use thiserror::Error;

/// Errors raised by the facility-location primitives and mechanisms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty instance")]
    EmptyInstance,

    #[error("empty value list")]
    EmptyValues,

    #[error("non-finite coordinate ({x}, {y})")]
    NonFiniteCoordinate { x: f64, y: f64 },

    #[error("invalid weight {0}: weights must be positive and finite")]
    InvalidWeight(f64),

    #[error("invalid confidence {0}: must lie in [0, 1)")]
    InvalidConfidence(f64),

    #[error("invalid weight range: w_min = {w_min}, w_max = {w_max}")]
    InvalidWeightRange { w_min: f64, w_max: f64 },

    #[error("optimal solver failed: mechanism cost {mech_cost} is below optimal cost {opt_cost}")]
    OptimalSolverFailed { mech_cost: f64, opt_cost: f64 },

    #[error("optimal solvers disagree: iterative cost {iterative}, grid cost {grid}, allowed slack {slack}")]
    OracleDisagreement { iterative: f64, grid: f64, slack: f64 },

    #[error("n = {n} incompatible with c = {c}: cluster sizes are not integral")]
    IncompatibleSize { n: usize, c: f64 },

    #[error("prediction required when confidence is positive")]
    MissingPrediction,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
