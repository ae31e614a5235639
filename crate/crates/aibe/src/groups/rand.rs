//! Seedable randomness sources feeding every scalar draw in the library.
//!
//! All protocol operations take an explicit [`ScalarSource`] instead of an
//! ambient RNG, so experiments are reproducible and the worked small-prime
//! vectors can be replayed exactly through the production code path.

use std::collections::VecDeque;

use rand_core::{RngCore, SeedableRng};
use sha2::{Digest, Sha256};

use super::{BilinearContext, Scalar};

/// A source of uniformly random nonzero scalars.
pub trait ScalarSource {
    /// Draws a scalar uniform on `[1, p)`.
    fn next_nonzero(&mut self, ctx: &BilinearContext) -> Scalar;
}

/// Production source: a ChaCha20 stream keyed by an explicit seed.
pub struct SeededSource {
    rng: rand_chacha::ChaCha20Rng,
}

impl SeededSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: rand_chacha::ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn from_seed_bytes(seed: [u8; 32]) -> Self {
        Self {
            rng: rand_chacha::ChaCha20Rng::from_seed(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    pub fn fill_bytes(&mut self, buf: &mut [u8]) {
        self.rng.fill_bytes(buf)
    }
}

/// Derives an independent sub-seed, used to fan experiments out into
/// per-trial sources without correlating their streams.
pub fn derive_seed(base: u64, label: &str, index: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(b"aibe/seed/v1");
    h.update(base.to_be_bytes());
    h.update((label.len() as u64).to_be_bytes());
    h.update(label.as_bytes());
    h.update(index.to_be_bytes());
    let digest = h.finalize();
    u64::from_be_bytes(digest[..8].try_into().unwrap())
}

impl ScalarSource for SeededSource {
    fn next_nonzero(&mut self, ctx: &BilinearContext) -> Scalar {
        ctx.sample_nonzero(&mut self.rng)
    }
}

/// Test tape: scripted integer draws, consumed front to back.
///
/// Panics when exhausted or when a scripted value reduces to zero; a tape is
/// always authored for a specific vector, so both cases are authoring bugs.
pub struct FixedTape {
    values: VecDeque<u64>,
}

impl FixedTape {
    pub fn new(values: &[u64]) -> Self {
        Self {
            values: values.iter().copied().collect(),
        }
    }

    pub fn remaining(&self) -> usize {
        self.values.len()
    }
}

impl ScalarSource for FixedTape {
    fn next_nonzero(&mut self, ctx: &BilinearContext) -> Scalar {
        let v = self
            .values
            .pop_front()
            .expect("fixed tape exhausted; script more values");
        let s = ctx.scalar_from_u64(v);
        assert!(!s.is_zero(), "tape value {v} reduces to zero");
        s
    }
}
