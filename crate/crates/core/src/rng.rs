//! Counter-based per-trial random streams.
//!
//! A [`Substreams`] handle is keyed by `(seed, domain, run)`; trial `i` gets
//! its own ChaCha stream number `i`, so the draws for a trial never depend on
//! which other trials ran first or on which thread.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random generator handed to a single trial.
pub type TrialRng = ChaCha8Rng;

/// Domain tags keep unrelated consumers of one seed apart.
pub mod domain {
    pub const MATCHED: u64 = 0x6d61_7463;
    pub const UNMATCHED: u64 = 0x756e_6d61;
    pub const TELEGRAPH: u64 = 0x7465_6c65;
    pub const CONDITIONAL: u64 = 0x636f_6e64;
}

#[derive(Debug, Clone)]
pub struct Substreams {
    key: [u8; 32],
}

impl Substreams {
    pub fn new(seed: u64, domain: u64, run: u64) -> Self {
        let mut keygen = ChaCha8Rng::seed_from_u64(seed);
        keygen.set_stream(splitmix64(domain ^ splitmix64(run)));
        let mut key = [0u8; 32];
        keygen.fill_bytes(&mut key);
        Self { key }
    }

    /// Generator for trial `index`; identical on every call.
    pub fn trial(&self, index: u64) -> TrialRng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(index);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
