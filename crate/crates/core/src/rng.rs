//! Seeded random bit streams.
//!
//! Every random decision is taken from a ChaCha8 stream identified by a
//! `(seed, stream)` pair, so any sample can be regenerated from those two
//! numbers alone regardless of what else was drawn before it.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed for an indexed sub-task (tower level, Monte Carlo row, ...).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    mix(mix(seed) ^ index.wrapping_mul(0xd1b5_4a32_d192_ed03))
}

/// Consumes a ChaCha8 stream one bit at a time, low bit first.
pub struct BitStream {
    rng: ChaCha8Rng,
    buf: u64,
    left: u32,
}

impl BitStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        BitStream {
            rng,
            buf: 0,
            left: 0,
        }
    }

    #[inline]
    pub fn next_bit(&mut self) -> bool {
        if self.left == 0 {
            self.buf = self.rng.next_u64();
            self.left = 64;
        }
        let b = self.buf & 1 == 1;
        self.buf >>= 1;
        self.left -= 1;
        b
    }

    /// Uniform integer in `0..bound` by rejection on the next 64-bit word.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let x = self.rng.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }
}
