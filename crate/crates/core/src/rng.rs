//! Deterministic random streams.
//!
//! Every random draw in the library comes from a [`SimRng`] (ChaCha8, via
//! `rand_chacha`) seeded with a single `u64`. Per-trial seeds are derived with
//! [`derive_seed`], so a trial's randomness depends only on its coordinates
//! and never on scheduling order.

use rand_chacha::rand_core::SeedableRng;

pub type SimRng = rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// SplitMix64 finaliser.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a hash of a tag string.
pub fn fnv1a(tag: &str) -> u64 {
    tag.bytes().fold(0xCBF2_9CE4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// Seed for one purpose within one trial of one experiment:
///
/// ```text
/// h = splitmix64(master)
/// h = splitmix64(h ^ fnv1a(experiment))
/// h = splitmix64(h ^ trial)
/// h = splitmix64(h ^ fnv1a(purpose))
/// ```
pub fn derive_seed(master: u64, experiment: &str, trial: u64, purpose: &str) -> u64 {
    let mut h = splitmix64(master);
    h = splitmix64(h ^ fnv1a(experiment));
    h = splitmix64(h ^ trial);
    splitmix64(h ^ fnv1a(purpose))
}
