//! Seeding conventions shared by every randomized operation.
//!
//! All randomness flows from explicit `u64` seeds into [`ChaCha20Rng`]
//! instances owned by the caller. Operations that need more than one
//! independent source split a seed into numbered ChaCha streams, so a single
//! seed reproduces the whole computation.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type StreamRng = ChaCha20Rng;

/// Stream used by `verify` for the random partition shuffle.
pub const PARTITION_STREAM: u64 = 0;
/// Stream used by `verify` for the Laplace noise draw.
pub const NOISE_STREAM: u64 = 1;

/// Generator for `seed`, on the default stream 0.
pub fn rng_from_seed(seed: u64) -> StreamRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Generator for `seed` positioned on ChaCha stream `stream`.
///
/// Streams of the same seed are independent keystreams of the same key.
pub fn substream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a base seed and a sequence of counters.
///
/// `derive_seed(b, &[c, r]) = mix64(mix64(mix64(b) ^ c) ^ r)`. The harness
/// uses this with `(cell index, rep index)` so any replicate can be re-run
/// on its own.
pub fn derive_seed(base: u64, counters: &[u64]) -> u64 {
    counters.iter().fold(mix64(base), |acc, &c| mix64(acc ^ c))
}
