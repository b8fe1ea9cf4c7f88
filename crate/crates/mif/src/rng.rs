//! Deterministic seed derivation.
//!
//! Every randomized component in this crate is driven by a 64-bit seed.
//! Sub-seeds (per trial, per sampler copy, per hash family) are derived with
//! the SplitMix64 finalizer so that reruns with the same base seed reproduce
//! every byte of output, independent of thread scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer: a fast, well-mixed bijection on `u64`.
#[inline]
pub fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^= x >> 31;
    x
}

/// Derives the `index`-th sub-seed of `seed` (the SplitMix64 sequence).
#[inline]
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    mix64(seed.wrapping_add(GOLDEN.wrapping_mul(index.wrapping_add(1))))
}

/// Seeded ChaCha generator; small and fast enough for per-trial construction.
pub fn chacha(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Maps a raw hash to a uniform double in the half-open interval (0, 1].
///
/// The open end at zero keeps `-ln(u)` finite.
#[inline]
pub fn unit_open_closed(bits: u64) -> f64 {
    ((bits >> 11) as f64 + 1.0) * (1.0 / 9_007_199_254_740_992.0)
}

/// Maps a raw hash to a uniform double in the open interval (0, 1).
#[inline]
pub fn unit_open_open(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * (1.0 / 4_503_599_627_370_496.0)
}
