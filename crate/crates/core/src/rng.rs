//! Deterministic counter-based random streams.
//!
//! A stream is keyed by `(seed, purpose tag, index)`. Output `i` is a pure
//! function of the key and the counter, so distinct streams are independent
//! of evaluation order and thread scheduling, and a fixed seed reproduces
//! bit-identical sequences on every platform. Not cryptographically secure.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer; full-avalanche 64-bit mix.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct RngStream {
    state: u64,
}

impl RngStream {
    /// Derive the substream keyed by `(seed, tag, index)`.
    pub fn new(seed: u64, tag: &str, index: u64) -> Self {
        let mut key = mix64(seed ^ GOLDEN);
        for &byte in tag.as_bytes() {
            key = mix64(key.wrapping_add(GOLDEN) ^ u64::from(byte));
        }
        key = mix64(key.wrapping_add(GOLDEN) ^ index);
        Self { state: key }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform draw in the open interval (0, 1).
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Standard normal draw (Box-Muller; two uniforms per call).
    #[inline]
    pub fn next_normal(&mut self) -> f64 {
        let u1 = self.next_open01();
        let u2 = self.next_open01();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}
