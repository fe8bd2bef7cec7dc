//! Seeded, platform-independent randomness.
//!
//! A [`RandomSource`] names a ChaCha8 stream by `(seed, stream)`. Experiments
//! derive one stream per work unit with [`RandomSource::fork`], so the draw
//! sequence of a unit never depends on which thread ran it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomSource {
    pub seed: u64,
    pub stream: u64,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource { seed, stream: 0 }
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        RandomSource { seed, stream }
    }

    /// A child source whose stream is a hash of this stream and `keys`.
    pub fn fork(&self, keys: &[u64]) -> RandomSource {
        let mut h = splitmix64(self.stream ^ 0x6a09_e667_f3bc_c908);
        for &k in keys {
            h = splitmix64(h ^ k);
        }
        RandomSource {
            seed: self.seed,
            stream: h,
        }
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
