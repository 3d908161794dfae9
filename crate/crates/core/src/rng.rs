//! Seed plumbing.
//!
//! Every random stream in the crate is a ChaCha8 generator addressed by a
//! `(seed, stream)` pair. Batch replications get their own seed through
//! [`derive_seed`], so a replication can be re-run in isolation and batches can
//! be split across threads without changing any number.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream used for the event loop of a trajectory.
pub const DYNAMICS_STREAM: u64 = 0;
/// Stream used to draw random initial infected sets.
pub const INITIAL_STREAM: u64 = 1;
/// Stream used by restart vectors and sampled searches in graph metrics.
pub const METRICS_STREAM: u64 = 2;

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of replication `index` under `base_seed`.
pub fn derive_seed(base_seed: u64, index: u64) -> u64 {
    splitmix64(base_seed ^ splitmix64(index.wrapping_add(0x5EED)))
}

/// Generator for `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Exponential variate with the given rate, by inversion.
#[inline]
pub fn exponential<R: Rng + ?Sized>(rng: &mut R, rate: f64) -> f64 {
    let u: f64 = rng.gen();
    -libm::log1p(-u) / rate
}

/// Uniform index in `0..len` derived from a key without touching any stream.
///
/// Used by policies whose random choices must be a pure function of
/// `(policy seed, draw index)`.
#[inline]
pub fn keyed_index(seed: u64, draw: u64, len: usize) -> usize {
    debug_assert!(len > 0);
    let x = splitmix64(seed ^ splitmix64(draw));
    // multiply-shift keeps the pick unbiased up to 2^-64
    ((u128::from(x) * len as u128) >> 64) as usize
}
