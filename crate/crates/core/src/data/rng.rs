//! Seeded random streams.
//!
//! A stream is xoshiro256++ whose 256-bit state is filled from SplitMix64
//! seeded with a 64-bit value. Conversions to floats and bounded integers
//! are spelled out here rather than borrowed from a sampling library, so the
//! same seed gives the same data in any implementation.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const TWO_POW_NEG_53: f64 = 1.0 / (1u64 << 53) as f64;

/// Seed of stream `stream` derived from a base seed.
pub fn stream_seed(seed: u64, stream: u64) -> u64 {
    seed ^ stream.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)
}

#[derive(Debug, Clone)]
pub struct StreamRng(Xoshiro256PlusPlus);

impl StreamRng {
    pub fn new(seed: u64) -> Self {
        StreamRng(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    /// Independent stream number `stream` under `seed`, e.g. one per trial.
    pub fn for_stream(seed: u64, stream: u64) -> Self {
        Self::new(stream_seed(seed, stream))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform on `[0, 1)` from the top 53 bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * TWO_POW_NEG_53
    }

    /// Uniform on the open interval `(0, 1)`.
    pub fn open_uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * TWO_POW_NEG_53
    }

    /// Integer in `0..n` by multiply-shift, `floor(u64 * n / 2^64)`.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Fisher-Yates, swapping position `i` with `below(i + 1)` for
    /// `i = len - 1` down to 1.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}
