//! Counter-based SplitMix64 stream.
//!
//! Output number `i` (zero based) of the stream keyed by `seed` is
//! `mix64(seed + (i + 1) * GAMMA)` in wrapping 64-bit arithmetic, which is
//! exactly the sequence produced by the reference sequential SplitMix64
//! generator started from state `seed`. Any element can be computed without
//! generating its predecessors.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const SPLIT_SALT: u64 = 0xD1B5_4A32_D192_ED03;

/// The SplitMix64 finalizer (a bijection on `u64`).
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Value at position `index` of the stream keyed by `seed`.
#[inline]
pub fn value_at(seed: u64, index: u64) -> u64 {
    mix64(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
}

/// Seed of child stream `index` under `root`.
///
/// `derive_seed(root, i) = mix64(root ^ mix64(i ^ SPLIT_SALT))`. Distinct
/// indices give distinct child seeds for a fixed root, since both `mix64`
/// and xor with a constant are bijections.
#[inline]
pub fn derive_seed(root: u64, index: u64) -> u64 {
    mix64(root ^ mix64(index ^ SPLIT_SALT))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterRng {
    seed: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of values drawn so far.
    pub fn position(&self) -> u64 {
        self.counter
    }

    /// Independent child stream.
    pub fn split(&self, index: u64) -> CounterRng {
        CounterRng::new(derive_seed(self.seed, index))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let v = value_at(self.seed, self.counter);
        self.counter = self.counter.wrapping_add(1);
        v
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`.
    #[inline]
    pub fn next_f64_open_closed(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
