//! The crate-wide random number generator.
//!
//! Everything randomized is driven by ChaCha8 seeded through
//! `SeedableRng::seed_from_u64` (SplitMix64 key expansion, as implemented
//! by rand_chacha 0.3 / rand_core 0.6). Fixing the algorithm and version
//! here is what makes sample streams reproducible across machines; batch
//! workers use consecutive seeds `base + worker`.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Identifier written into run manifests.
pub const RNG_ALGORITHM: &str = "chacha8/seed_from_u64/v1";

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for the i-th worker of a batch based at `base`.
pub fn worker_seed(base: u64, worker: u64) -> u64 {
    base.wrapping_add(worker)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    /// Freezes the head of the stream; a change here means sample streams
    /// are no longer reproducible and the version tag must be bumped.
    #[test]
    fn stream_head_is_stable() {
        let mut rng = seeded(0);
        let head: Vec<u32> = (0..4).map(|_| rng.gen()).collect();
        assert_eq!(head, vec![2811902828, 3045455719, 3134767159, 2001118559]);
    }

    #[test]
    fn distinct_seeds_distinct_streams() {
        let a: u64 = seeded(1).gen();
        let b: u64 = seeded(2).gen();
        assert_ne!(a, b);
        assert_eq!(worker_seed(7, 3), 10);
    }
}
