//! Deterministic random-number streams.
//!
//! A [`SeededStream`] is keyed by a 64-bit root seed and a label path such as
//! `"suite/epi/n=2/slot/3"`. Equal `(root_seed, label)` pairs always produce
//! identical sequences, and distinct labels give statistically independent
//! ChaCha8 streams, so estimators can split work across any number of threads
//! and still merge to bit-identical results.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A labelled, reproducible random stream.
///
/// Single-consumer by design: concurrent users must derive distinct
/// substreams via [`SeededStream::substream`].
#[derive(Debug, Clone)]
pub struct SeededStream {
    rng: ChaCha8Rng,
    root_seed: u64,
    label: String,
}

impl SeededStream {
    pub fn new(root_seed: u64, label: &str) -> Self {
        let key = derive_key(root_seed, label);
        SeededStream {
            rng: ChaCha8Rng::from_seed(key),
            root_seed,
            label: label.to_owned(),
        }
    }

    /// Derive an independent stream for a sub-task. The child is seeded from
    /// `(root_seed, "{label}/{sublabel}")`, not from the parent's state, so
    /// the order in which substreams are created or consumed is irrelevant.
    pub fn substream(&self, sublabel: &str) -> SeededStream {
        SeededStream::new(self.root_seed, &format!("{}/{}", self.label, sublabel))
    }

    pub fn root_seed(&self) -> u64 {
        self.root_seed
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        // 53 random bits, the usual double-precision construction.
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via rand_distr's ziggurat.
    pub fn gaussian(&mut self) -> f64 {
        rand::Rng::sample(self, rand_distr::StandardNormal)
    }
}

impl RngCore for SeededStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
}

/// Expand (root_seed, label) into a 256-bit ChaCha key.
///
/// FNV-1a over the label folded with the root seed, then diffused through
/// four rounds of splitmix64. Not cryptographic; collision-free enough for
/// the handful of labels a suite run creates, and stable across platforms.
fn derive_key(root_seed: u64, label: &str) -> [u8; 32] {
    const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = FNV_OFFSET ^ root_seed;
    for byte in label.as_bytes() {
        h ^= u64::from(*byte);
        h = h.wrapping_mul(FNV_PRIME);
    }
    let mut key = [0u8; 32];
    let mut state = h;
    for chunk in 0..4 {
        // splitmix64 step
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state ^ root_seed.rotate_left(chunk as u32 * 16);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^= z >> 31;
        key[chunk * 8..chunk * 8 + 8].copy_from_slice(&z.to_le_bytes());
    }
    key
}
