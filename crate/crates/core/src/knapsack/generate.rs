//! Seeded random instance generation.
//!
//! The generator is pinned so that fixtures stay valid across platforms and
//! dependency upgrades: a ChaCha8 stream seeded with `seed_from_u64`, mapped
//! to uniform doubles by taking the top 53 bits of each 64-bit draw. Draw
//! order is: the fill fraction `p`, then per item its weight followed by its
//! benefit block (criterion-major, scenario-minor).

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::KnapsackInstance;
use crate::aggregation::{CriteriaSet, ScenarioSet};
use crate::error::{Error, Result};

/// Uniform draw in [0, 1) from the top 53 bits of one `u64`.
fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform draw in [lo, hi).
fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * unit(rng)
}

/// Generates a random instance: a fill fraction `p ~ U(0.25, 0.75)` fixes the
/// mean item weight at `W = 1/p`, item weights are drawn from
/// `U(0.5 W, 1.5 W)` and benefits from `U(0, 1)`. Scenario probabilities and
/// criterion importances are uniform.
///
/// The capacity is `n_items`: with mean weight `1/p`, about `p * n_items`
/// items fit on average.
pub fn generate_instance(
    n_items: usize,
    n_scenarios: usize,
    n_criteria: usize,
    seed: u64,
) -> Result<KnapsackInstance> {
    if n_items == 0 || n_scenarios == 0 || n_criteria == 0 {
        return Err(Error::InvalidSize(format!(
            "instance dimensions must be positive, got {n_items} items, \
             {n_scenarios} scenarios, {n_criteria} criteria"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = uniform(&mut rng, 0.25, 0.75);
    let mean_weight = 1.0 / p;
    let mut weights = Vec::with_capacity(n_items);
    let mut benefits = Vec::with_capacity(n_items * n_criteria * n_scenarios);
    for _ in 0..n_items {
        weights.push(uniform(&mut rng, 0.5 * mean_weight, 1.5 * mean_weight));
        for _ in 0..n_criteria * n_scenarios {
            benefits.push(unit(&mut rng));
        }
    }
    KnapsackInstance::new(
        weights,
        n_items as f64,
        benefits,
        ScenarioSet::uniform(n_scenarios)?,
        CriteriaSet::uniform(n_criteria)?,
        seed,
    )
}
