/// Counter-based pseudorandom stream.
///
/// Output i of stream (seed, stream_id) is
///
/// ```text
/// mix64(key + (i + 1) * 0x9E3779B97F4A7C15)
/// key = mix64(seed ^ 0x9E3779B97F4A7C15) ^ mix64(stream_id * 0xA24BAED4963EE407)
/// ```
///
/// where `mix64` is the 64-bit finalizer from SplitMix64
/// (xor-shift 30, multiply 0xBF58476D1CE4E5B9, xor-shift 27, multiply
/// 0x94D049BB133111EB, xor-shift 31) and all arithmetic wraps.
///
/// Because each output depends only on (seed, stream_id, i), a run that
/// partitions work by stream or substream reproduces bit-identical draws no
/// matter how the work is scheduled. Never share one stream between threads;
/// give each unit of work its own `substream`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    key: u64,
    counter: u64,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const STREAM_SALT: u64 = 0xA24B_AED4_963E_E407;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let key = mix64(seed ^ GOLDEN) ^ mix64(stream_id.wrapping_mul(STREAM_SALT));
        RngStream {
            seed,
            stream_id,
            key,
            counter: 0,
        }
    }

    #[inline]
    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Child stream `index` of this stream. Derivation uses only (seed,
    /// stream_id, index), not the parent's position, so substreams taken
    /// before or after drawing are the same stream.
    pub fn substream(&self, index: u64) -> RngStream {
        RngStream::new(
            self.seed,
            mix64(self.stream_id ^ GOLDEN).wrapping_add(index),
        )
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter += 1;
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform draw in [0, 1) with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in [lo, hi).
    #[inline]
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Standard normal via Box-Muller (cosine branch only).
    pub fn standard_normal(&mut self) -> f64 {
        let mut u1 = self.next_f64();
        while u1 <= 0.0 {
            u1 = self.next_f64();
        }
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}
