//! Seed derivation.
//!
//! Every random quantity in a trial is a pure function of a 64-bit seed. Trial
//! seeds are derived as `mix(master_seed ^ trial_index, point_key)` where the
//! point key folds in every swept parameter, and per-component seeds are
//! `mix(trial_seed, stream)`. The derivation never depends on scheduling, so
//! serial and parallel sweeps see identical instances.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags for the components of one trial.
pub const STREAM_MATRIX: u64 = 1;
pub const STREAM_TRUTH: u64 = 2;
pub const STREAM_NOISE: u64 = 3;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive combination of two seeds.
pub fn mix(a: u64, b: u64) -> u64 {
    splitmix64(splitmix64(a) ^ b.rotate_left(17) ^ 0xA076_1D64_78BD_642F)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
