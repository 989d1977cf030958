//! Splittable, seedable random streams.
//!
//! Each recursive branch of the engine derives an independent stream from
//! (parent key, branch tag), so results are reproducible regardless of how
//! branches are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

#[derive(Clone, Copy, Debug)]
pub struct RngStream {
    key: u64,
}

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        RngStream { key: splitmix64(seed) }
    }

    /// Derives the child stream for the given branch tag.
    pub fn child(&self, tag: u64) -> Self {
        RngStream {
            key: splitmix64(self.key ^ splitmix64(tag.wrapping_add(0x9e37_79b9_7f4a_7c15))),
        }
    }

    /// Materializes a generator for this stream.
    pub fn rng(&self) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(self.key)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
