/// SplitMix64 stream. Small and fully specified, so generated instances
/// can be reproduced bit-for-bit by other implementations.
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

    /// Uniform draw from `1..=m`, rejecting draws above the largest multiple of `m`.
    pub fn uniform_inclusive(&mut self, m: u64) -> u64 {
        assert!(m >= 1, "empty range");
        // 2^64 mod m
        let excess = (u64::MAX % m + 1) % m;
        let limit = u64::MAX - excess;
        loop {
            let z = self.next_u64();
            if excess == 0 || z <= limit {
                return 1 + z % m;
            }
        }
    }
}
