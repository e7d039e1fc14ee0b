//! Seeded pseudorandomness for sampling and resampling.
//!
//! A splitmix-style 64-bit mix keeps every stochastic analysis reproducible
//! across platforms and runs without depending on any external RNG's stream
//! stability.

/// SplitMix64 generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound` via rejection sampling (unbiased).
    pub fn gen_range(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % bound;
            }
        }
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.gen_range(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }

    /// Derive an independent stream for a keyed sub-analysis.
    pub fn derive(seed: u64, key: u64) -> Self {
        let mut base = SplitMix64::new(seed ^ key.wrapping_mul(0xd6e8feb86659fd93));
        // burn one output so derived streams with nearby keys decorrelate
        base.next_u64();
        base
    }
}
