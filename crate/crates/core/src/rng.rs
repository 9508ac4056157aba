//! Counter-based random streams.
//!
//! Every random quantity attached to a vertex (its offspring draw, its
//! sleeping-frog count) comes from a ChaCha8 stream whose key is a
//! SplitMix64 hash of `(seed, vertex path-id, purpose)`. The value at a
//! vertex therefore does not depend on the order in which the tree is
//! explored, and two simulations sharing a seed see the same frogs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Name recorded in output headers.
pub const GENERATOR_NAME: &str = "chacha8/splitmix64-keyed";

/// Key of the root vertex. Child keys are derived from it.
pub const ROOT_KEY: u64 = 0x6a09_e667_f3bc_c908;

/// Purpose tags, so independent quantities at the same vertex use
/// independent streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Offspring = 1,
    Frogs = 2,
    Moves = 3,
    Branching = 4,
    Exits = 5,
    Coupling = 6,
    FreeMoves = 7,
}

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Path-id of the `index`-th child of the vertex with key `parent`.
#[inline]
pub fn child_key(parent: u64, index: u32) -> u64 {
    mix64(parent ^ mix64(0x5851_f42d_4c95_7f2d ^ u64::from(index)))
}

#[inline]
pub fn stream_seed(seed: u64, key: u64, stream: Stream) -> u64 {
    mix64(mix64(seed ^ (stream as u64).rotate_left(48)) ^ key)
}

/// The stream for one `(seed, vertex, purpose)` triple.
pub fn vertex_rng(seed: u64, key: u64, stream: Stream) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(seed, key, stream))
}

/// A run-level stream (walker moves, branching, ...).
pub fn run_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(seed, 0, stream))
}
