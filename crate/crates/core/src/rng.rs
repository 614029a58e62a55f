//! Seeded, bit-reproducible pseudo-random numbers.
//!
//! All randomized operations in the crate (the random pair colorings, the
//! subset sampler, the local search, the randomized verification suites)
//! draw from this generator, so any result is reproducible from its seed on
//! every platform. The algorithm is SplitMix64 (Steele, Lea & Flood's
//! `splittable` mixer, the same finalizer used to seed xoshiro state): a
//! 64-bit Weyl sequence passed through an avalanching mix. It is fixed
//! deliberately; swapping generators would silently change every seeded
//! artifact.

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Derives an independent child stream, used to hand deterministic
    /// per-worker seeds to parallel restarts.
    pub fn child(seed: u64, index: u64) -> Self {
        SplitMix64::new(mix(seed ^ index.wrapping_mul(GOLDEN_GAMMA)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix(self.state)
    }

    /// Uniform value in `0..bound` without modulo bias (rejection sampling
    /// over the largest multiple of `bound`).
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        if bound.is_power_of_two() {
            return self.next_u64() & (bound - 1);
        }
        let cap = (u64::MAX / bound) * bound;
        loop {
            let x = self.next_u64();
            if x < cap {
                return x % bound;
            }
        }
    }

    pub fn next_usize(&mut self, bound: usize) -> usize {
        self.next_below(bound as u64) as usize
    }

    pub fn next_bool(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }

    /// Chooses `count` distinct values from `0..n` (partial Fisher-Yates),
    /// returned sorted.
    pub fn sample_distinct(&mut self, n: usize, count: usize) -> Vec<usize> {
        assert!(count <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..count {
            let j = i + self.next_usize(n - i);
            pool.swap(i, j);
        }
        let mut picked = pool[..count].to_vec();
        picked.sort_unstable();
        picked
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_stream() {
        // First outputs for seed 0; frozen so a silent algorithm change
        // cannot slip through.
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn bounded_draws_in_range() {
        let mut rng = SplitMix64::new(42);
        for bound in [1u64, 2, 3, 7, 10, 64, 1000] {
            for _ in 0..200 {
                assert!(rng.next_below(bound) < bound);
            }
        }
    }

    #[test]
    fn sample_distinct_is_distinct_and_sorted() {
        let mut rng = SplitMix64::new(7);
        let s = rng.sample_distinct(20, 8);
        assert_eq!(s.len(), 8);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(s.iter().all(|&v| v < 20));
    }

    #[test]
    fn child_streams_differ() {
        let a = SplitMix64::child(1, 0).next_u64();
        let b = SplitMix64::child(1, 1).next_u64();
        assert_ne!(a, b);
    }
}
