//! Seeded random sources.
//!
//! Every stochastic routine draws from ChaCha8, a counter-based stream generator,
//! so a `u64` seed fully determines the output on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Real;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer; derives independent sub-seeds from one user seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Source of uniform `[0, 1)` draws for the swarm.
///
/// Production runs use [`SeededDraws`]; tests can substitute [`PinnedDraws`].
pub trait UnitDraws<T> {
    fn next_unit(&mut self) -> T;
}

#[derive(Debug, Clone)]
pub struct SeededDraws {
    rng: ChaCha8Rng,
}

impl SeededDraws {
    pub fn new(seed: u64) -> Self {
        Self { rng: seeded(seed) }
    }
}

impl<T: Real> UnitDraws<T> for SeededDraws {
    #[inline]
    fn next_unit(&mut self) -> T {
        T::lit(self.rng.random::<f64>())
    }
}

/// Always returns the same value.
#[derive(Debug, Clone, Copy)]
pub struct PinnedDraws<T>(pub T);

impl<T: Real> UnitDraws<T> for PinnedDraws<T> {
    #[inline]
    fn next_unit(&mut self) -> T {
        self.0
    }
}
