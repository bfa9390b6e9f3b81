//! Empirical verification harnesses built on the mechanisms and solvers.

mod evaluate;
mod fuzz;
mod search;
mod sweep;

pub use evaluate::{
    effective_confidence, evaluate, evaluate_with, instance_id, EvalOptions, PredictionMode,
    RatioReport,
};
pub use fuzz::{fuzz_strategyproofness, FuzzConfig, FuzzReport, Violation};
pub use search::{adversarial_search, SearchConfig, SearchReport};
pub use sweep::{frontier, tradeoff_sweep};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent stream for work unit `unit` under a top-level `seed`.
pub(crate) fn unit_rng(seed: u64, unit: u64) -> ChaCha8Rng {
    // splitmix64 finalizer over the pair keeps neighbouring units unrelated.
    let mut z = seed ^ unit.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}
