//! Seeded generator for k-means++ and the PCA start vector.

/// 64-bit linear congruential generator with Knuth's MMIX constants:
///
/// ```text
/// state ← state · 6364136223846793005 + 1442695040888963407   (mod 2^64)
/// ```
///
/// The seed is the initial state. [`Lcg64::next_f64`] steps once and maps
/// the top 53 bits of the new state to `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Lcg64 {
        Lcg64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(Self::MULTIPLIER).wrapping_add(Self::INCREMENT);
        self.state
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
