//! The one random generator every component draws from.
//!
//! SplitMix64 seeded directly with the user seed. Both search engines consume
//! it in the same order: one Fisher–Yates shuffle for a random start, then one
//! tenure draw per committed move.

use rand::SeedableRng;
pub use rand_xoshiro::SplitMix64;

pub fn from_seed(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}
