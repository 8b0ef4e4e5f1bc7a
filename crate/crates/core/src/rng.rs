//! Seeded generator used everywhere randomness is part of the contract.
//!
//! The algorithm is fixed so that generated patterns, sweeps, and shuffles
//! are bit-identical across platforms and releases: SplitMix64 with the
//! usual constants (increment 0x9E3779B97F4A7C15, mix multipliers
//! 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB), with bounded draws taken by
//! 128-bit multiply-shift. Changing any of this would silently invalidate
//! pinned outputs, so don't.

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw from `0..bound` via multiply-shift.
    pub fn next_index(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "empty range");
        ((self.next_u64() as u128 * bound as u128) >> 64) as usize
    }

    /// Fisher–Yates shuffle, driven by this generator.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_index(i + 1);
            items.swap(i, j);
        }
    }
}
