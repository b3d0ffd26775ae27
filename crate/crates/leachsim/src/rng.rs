//! Deterministic randomness for simulation runs.
//!
//! Two pieces: a sequential xorshift64* generator, and keyed draws that
//! address every stochastic decision by `(seed, stream, round, unit)`
//! instead of by position in a shared stream. Keyed draws mean two runs
//! that share a seed sample the same node placements, the same sensor
//! walks, and the same election lotteries even when their protocols branch
//! differently, which is what makes per-seed comparisons across variants
//! genuinely paired. Everything here is stable across platforms and
//! toolchains; none of it is suitable for anything security related.

/// Deterministic generator with a single 64-bit state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimRng {
    state: u64,
}

impl SimRng {
    /// Create a generator from a seed. Zero is remapped to a fixed non-zero
    /// constant because xorshift locks up on an all-zero state.
    pub fn new(seed: u64) -> Self {
        let state = if seed == 0 { 0x9E37_79B9_7F4A_7C15 } else { seed };
        Self { state }
    }

    /// Next raw 64-bit value.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in `[lo, hi)`.
    #[inline]
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.next_f64() * (hi - lo)
    }
}

// splitmix64 finalizer; a bijection on u64 with strong avalanche
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent draw addresses within one seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    /// Node placement at deployment.
    Deploy = 1,
    /// Per-node sensor walk steps.
    Sense = 2,
    /// Per-node election lottery.
    Elect = 3,
    /// Replacement rotation picks.
    Rotate = 4,
}

/// Keyed draws for one seeded run: every value is a pure function of
/// `(seed, stream, round, unit)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DrawKeys {
    seed: u64,
}

impl DrawKeys {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    fn key(&self, stream: Stream, round: u32, unit: u64) -> u64 {
        mix64(mix64(mix64(self.seed ^ (stream as u64)) ^ u64::from(round)) ^ unit)
    }

    /// Uniform draw in `[0, 1)` for the addressed decision.
    pub fn unit(&self, stream: Stream, round: u32, unit: u64) -> f64 {
        (self.key(stream, round, unit) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Sequential generator rooted at the addressed decision, for the few
    /// places that need more than one draw.
    pub fn rng(&self, stream: Stream, round: u32, unit: u64) -> SimRng {
        SimRng::new(self.key(stream, round, unit))
    }
}
