//! Deterministic random streams.
//!
//! Every sampler takes a caller-owned RNG. Parallel simulations split work
//! into fixed-size chunks, each with its own ChaCha stream derived from the
//! master seed, so results do not depend on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Draws per independently seeded chunk in parallel simulations.
pub const CHUNK_SIZE: usize = 1 << 16;

pub fn seeded(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// RNG for chunk `index` of a simulation seeded with `seed`.
pub fn chunk_stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Splits `n` draws into `(chunk_index, len)` pairs of at most [`CHUNK_SIZE`].
pub fn chunks(n: usize) -> impl Iterator<Item = (u64, usize)> + Clone {
    (0..n.div_ceil(CHUNK_SIZE)).map(move |i| {
        let start = i * CHUNK_SIZE;
        (i as u64, CHUNK_SIZE.min(n - start))
    })
}
