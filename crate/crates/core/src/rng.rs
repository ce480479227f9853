//! Seeded random streams.
//!
//! Every run owns a [`ChaCha8Rng`] seeded from a `u64`. Gaussian draws use
//! `rand_distr::StandardNormal` (ziggurat); the transform is fixed by the
//! locked crate version and reported as [`GAUSSIAN_TRANSFORM`] in metadata.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

pub const GAUSSIAN_TRANSFORM: &str = "rand_distr::StandardNormal (ziggurat) over ChaCha8";

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream seed from a parent seed and a purpose tag.
pub fn derive(seed: u64, tag: u64) -> u64 {
    crate::util::mix64(seed ^ crate::util::mix64(tag))
}
