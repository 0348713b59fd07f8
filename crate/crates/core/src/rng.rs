//! Deterministic random source shared by every sampler in the crate.
//!
//! Backed by ChaCha8, which has a fixed, platform-independent output stream
//! and supports cheap independent substreams. Monte Carlo harnesses derive
//! one substream per trial from a master seed, so results do not depend on
//! how trials are scheduled across threads.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Debug, Clone)]
pub struct Rng {
    inner: ChaCha8Rng,
    seed: u64,
    stream: u64,
}

impl Rng {
    pub fn seed_from(seed: u64) -> Self {
        Self { inner: ChaCha8Rng::seed_from_u64(seed), seed, stream: 0 }
    }

    /// Independent substream `stream` of the generator seeded with `master`.
    pub fn for_stream(master: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(master);
        inner.set_stream(stream);
        Self { inner, seed: master, stream }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Standard normal draw.
    pub fn gaussian(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    /// Uniform draw on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform integer in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }

    /// Uniform draw from `{-1, +1}`.
    pub fn sign(&mut self) -> f64 {
        if self.inner.random::<bool>() {
            1.0
        } else {
            -1.0
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.random::<u64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Rng::seed_from(7);
        let mut b = Rng::seed_from(7);
        for _ in 0..100 {
            assert_eq!(a.gaussian().to_bits(), b.gaussian().to_bits());
        }
    }

    #[test]
    fn streams_differ() {
        let mut a = Rng::for_stream(7, 0);
        let mut b = Rng::for_stream(7, 1);
        let same = (0..32).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn pinned_first_draw() {
        // Guards against a silent change of generator or seeding scheme, which
        // would invalidate every stored experiment.
        let first = Rng::seed_from(0).next_u64();
        assert_eq!(first, 0xb585_f767_a79a_3b6c);
        assert_ne!(first, Rng::seed_from(1).next_u64());
    }
}
