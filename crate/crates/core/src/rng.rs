//! Minimal deterministic PRNG for reproducible sweeps and sampling.
//!
//! SplitMix64: a 64-bit mixing generator (Steele, Lea, Flood 2014). Chosen
//! over a bare LCG for its full-period low-bias output while staying a
//! dozen lines with no dependencies; every random draw in the crate and the
//! CLI flows through this generator from a configured seed.

use num_complex::Complex64;

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn complex_in_box(&mut self, half_width: f64) -> Complex64 {
        Complex64::new(
            self.range(-half_width, half_width),
            self.range(-half_width, half_width),
        )
    }
}
