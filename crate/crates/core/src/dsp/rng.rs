use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A seeded random stream identified by `(seed, stream_id)`.
///
/// Each Monte-Carlo trial gets its own `stream_id`, so the values a trial
/// sees do not depend on which thread runs it or in which order.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Stream `stream_id` of an independent family keyed by `(seed, self.stream_id, tag)`.
    ///
    /// Used to give separate experiments (or the two users of a trial)
    /// non-overlapping randomness.
    pub fn family(&self, tag: u64, stream_id: u64) -> RngStream {
        let key = splitmix64(splitmix64(self.seed ^ splitmix64(self.stream_id)) ^ tag);
        RngStream::new(key, stream_id)
    }

    /// Uniform draw on `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        assert!(lo < hi, "uniform draw needs lo < hi");
        let u: f64 = self.rng.random();
        let v = lo + (hi - lo) * u;
        if v >= hi {
            // rounding pushed us onto the open end
            f64::from_bits(hi.to_bits() - 1).max(lo)
        } else {
            v
        }
    }

    /// Uniform integer on `[lo, hi)`.
    pub fn uniform_int(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo < hi, "uniform draw needs lo < hi");
        self.rng.random_range(lo..hi)
    }

    /// `n` independent fair bits.
    pub fn bits(&mut self, n: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let word = self.rng.next_u64();
            let take = (n - out.len()).min(64);
            out.extend((0..take).map(|i| ((word >> i) & 1) as u8));
        }
        out
    }

    /// Standard normal draw (Box-Muller).
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform(0.0, 1.0);
        let u2 = self.uniform(0.0, 1.0);
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}
