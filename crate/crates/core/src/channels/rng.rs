//! Reproducible per-frame random streams.
//!
//! Every frame of a simulation draws from its own stream, keyed by
//! `(seed, frame index)`. The stream is a ChaCha block cipher in
//! counter mode, so draw `p` of frame `f` under seed `s` is a pure
//! function of `(s, f, p)` — results cannot depend on thread count or
//! scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Identifies one frame's random stream.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RngStream {
    pub seed: u64,
    pub frame: u64,
}

impl RngStream {
    pub fn new(seed: u64, frame: u64) -> Self {
        Self { seed, frame }
    }

    /// Instantiates the stream's generator.
    pub fn rng(self) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        let mut state = self.seed;
        for (i, chunk) in key.chunks_mut(8).enumerate() {
            state = splitmix64(state ^ (self.frame.wrapping_add(i as u64)).wrapping_mul(0x9E3779B97F4A7C15));
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        ChaCha8Rng::from_seed(key)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}
