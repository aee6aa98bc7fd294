//! Deterministic pseudo-random numbers for seeded searches and test data.
//!
//! The generator is a plain 64-bit xorshift with the recurrence
//!
//! ```text
//! x ^= x << 13;  x ^= x >> 7;  x ^= x << 17;
//! ```
//!
//! seeded through one round of the SplitMix64 finalizer
//!
//! ```text
//! z  = seed + stream * 0x9E3779B97F4A7C15
//! z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9;
//! z ^= z >> 27;  z *= 0x94D049BB133111EB;
//! z ^= z >> 31;
//! ```
//!
//! (all arithmetic wrapping). A zero state, on which xorshift would get
//! stuck, is replaced by `0x9E3779B97F4A7C15`. The recurrence is written
//! out here so that seeds reproduce bit-for-bit in any implementation.

const GOLDEN: u64 = 0x9E3779B97F4A7C15;

fn splitmix64(seed: u64) -> u64 {
    let mut z = seed;
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58476D1CE4E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D049BB133111EB);
    z ^= z >> 31;
    z
}

/// Seeded xorshift64 generator.
#[derive(Clone, Debug)]
pub struct XorShift64 {
    state: u64,
}

impl XorShift64 {
    /// Generator for `seed`, stream 0.
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Independent stream derived from the same seed; stream `r` is used
    /// for restart `r` of the tabu search.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut state = splitmix64(seed.wrapping_add(stream.wrapping_mul(GOLDEN)));
        if state == 0 {
            state = GOLDEN;
        }
        XorShift64 { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.state = x;
        x
    }

    /// Top bit of the next word.
    pub fn next_bit(&mut self) -> u8 {
        (self.next_u64() >> 63) as u8
    }

    /// Uniform value in `[0, m)` by modulo; the bias is negligible for the
    /// small ranges used here.
    pub fn next_below(&mut self, m: u64) -> u64 {
        debug_assert!(m > 0);
        self.next_u64() % m
    }

    /// Uniform float in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform integer in `[lo, hi]` (inclusive), as f64.
    pub fn next_int_in(&mut self, lo: i64, hi: i64) -> f64 {
        debug_assert!(lo <= hi);
        (lo + self.next_below((hi - lo + 1) as u64) as i64) as f64
    }
}
