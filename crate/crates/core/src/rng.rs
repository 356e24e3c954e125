//! Seeded random number generation.
//!
//! Every stochastic operation takes an explicit `u64` seed and builds a
//! [`SimRng`] from it. `SimRng` is ChaCha with 8 rounds, seeded through
//! `SeedableRng::seed_from_u64`, so streams are portable across platforms
//! and releases of this crate.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used for all simulations.
pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Derive an independent sub-seed for `stream` from `base` (SplitMix64 finalizer).
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base
        .wrapping_add(0x9E37_79B9_7F4A_7C15_u64.wrapping_mul(stream.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
