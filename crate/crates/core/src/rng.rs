//! Seeded random streams.
//!
//! All randomness comes from ChaCha8 (a counter-based stream cipher RNG).
//! A run is identified by a 64-bit seed; independent work items (trials,
//! restarts, data points) get their own stream number, so results do not
//! depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Recorded in every report so outputs can be regenerated elsewhere.
pub const GENERATOR: &str = "ChaCha8 (rand_chacha 0.9), seed_from_u64 + set_stream";

pub type StreamRng = ChaCha8Rng;

pub fn stream(seed: u64, stream_index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_index);
    rng
}

/// Derive a child seed for a named sub-experiment so that two components of
/// the same run never share a stream.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    // FNV-1a over the label, mixed with the parent seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed.rotate_left(17);
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
