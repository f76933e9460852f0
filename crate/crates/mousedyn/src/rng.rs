//! Deterministic, portable random number generation.
//!
//! Every stochastic step in the pipeline (splits, bootstrap resamples,
//! impostor sampling, feature subsampling) draws from xoshiro256**
//! seeded through splitmix64, so identical seeds reproduce identical
//! experiments across platforms and across serial/parallel runs.
//! Reference algorithms: Blackman & Vigna, "Scrambled linear
//! pseudorandom number generators".

/// splitmix64 stream. Also used to expand a 64-bit seed into
/// xoshiro256** state and to derive independent sub-seeds.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        mix64(self.state)
    }
}

fn mix64(z: u64) -> u64 {
    let z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    let z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the sub-seed for stream `index` of a master seed.
///
/// Equal to the `index`-th output of a splitmix64 stream started at
/// `master`, computed in O(1). Used so per-user and per-tree work can
/// run in parallel without sharing generator state.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// xoshiro256** 1.0.
#[derive(Debug, Clone)]
pub struct Xoshiro256StarStar {
    s: [u64; 4],
}

impl Xoshiro256StarStar {
    /// Seed via a splitmix64 expansion of `seed`, per the reference
    /// seeding recommendation.
    pub fn from_seed(seed: u64) -> Self {
        let mut sm = SplitMix64::new(seed);
        Self {
            s: [sm.next_u64(), sm.next_u64(), sm.next_u64(), sm.next_u64()],
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in [0, n). Lemire's widening-multiply method with
    /// rejection, so the draw is unbiased for every n.
    pub fn gen_range(&mut self, n: usize) -> usize {
        assert!(n > 0, "gen_range requires n > 0");
        let range = n as u64;
        let mut x = self.next_u64();
        let mut m = (x as u128) * (range as u128);
        let mut lo = m as u64;
        if lo < range {
            let threshold = range.wrapping_neg() % range;
            while lo < threshold {
                x = self.next_u64();
                m = (x as u128) * (range as u128);
                lo = m as u64;
            }
        }
        let _ = x;
        (m >> 64) as usize
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.gen_range(i + 1);
            xs.swap(i, j);
        }
    }

    /// Sample `k` distinct indices from `0..n` (partial Fisher-Yates);
    /// the returned order is the draw order.
    pub fn sample_indices(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n, "cannot sample {k} of {n}");
        let mut idx: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.gen_range(n - i);
            idx.swap(i, j);
        }
        idx.truncate(k);
        idx
    }
}
