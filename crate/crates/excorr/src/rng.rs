//! Deterministic pseudo-random number generation.
//!
//! Every random draw in this crate flows through [`SplitMix64`] so that other
//! implementations can reproduce results bit for bit. The integer stream is
//! the public-domain SplitMix64 generator (Steele, Lea & Vigna): the 64-bit
//! state starts at the user seed, advances by the golden-ratio constant
//! `0x9E3779B97F4A7C15`, and each output is a two-round multiply-xorshift mix
//! of the state. Floats take the top 53 bits of the next integer:
//! `(x >> 11) * 2^-53`, a uniform draw in `[0, 1)`.

/// SplitMix64 generator; one `u64` per step, seeded directly with a `u64`.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Next value of the raw integer stream.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in `[0, 1)` from the top 53 bits of [`Self::next_u64`].
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// `+1.0` or `-1.0` from the low bit of the next integer.
    pub fn sign(&mut self) -> f64 {
        if self.next_u64() & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Integer in `[0, bound)` by modulo reduction of the next integer.
    ///
    /// The modulo bias is irrelevant here; what matters is that the mapping
    /// is trivial to replicate in any language.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}
