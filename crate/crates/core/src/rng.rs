//! Seed derivation. Every random stream in the crate is derived from an
//! explicit user seed plus a stream tag, so results never depend on thread
//! scheduling or on the order in which tasks are created.

use rand::SeedableRng;
use rand_xoshiro::{SplitMix64, Xoshiro256PlusPlus};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function applied to `seed` combined with `stream`.
pub fn mix(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a seed from a path of stream tags, e.g. `[combination, fold]`.
pub fn derive(seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(seed, |acc, &tag| mix(acc, tag))
}

/// SplitMix64 generator used for shuffling folds and tuning splits.
pub fn splitmix(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// General-purpose generator for synthesis and feature sampling.
pub fn stream(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}
