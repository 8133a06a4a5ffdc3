//! SplitMix64 in counter form.
//!
//! The `n`-th output (1-based) of a SplitMix64 stream started at state `s` is
//! `mix(s + n * GOLDEN_GAMMA)`, so any draw can be produced from its index
//! without shared generator state. Sampling is therefore independent of
//! evaluation order.

pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `index`-th output (0-based) of the stream seeded with `seed`.
#[inline]
pub fn splitmix64_at(seed: u64, index: u64) -> u64 {
    mix(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Uniform double in `[0, 1)` built from the top 53 bits.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform double in `[-1, 1)` for draw `index`.
#[inline]
pub fn symmetric_uniform(seed: u64, index: u64) -> f64 {
    2.0 * unit_f64(splitmix64_at(seed, index)) - 1.0
}

/// Child seed for sub-task `index` (e.g. one sweep grid point).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    mix(seed ^ mix(index.wrapping_add(GOLDEN_GAMMA)))
}

/// Sequential SplitMix64 generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }
}

impl Iterator for SplitMix64 {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        Some(mix(self.state))
    }
}
