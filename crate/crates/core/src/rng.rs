//! Seedable, splittable randomness.
//!
//! Every sampler in the crate takes an explicit generator handle. Substreams
//! derived from a master seed via a stream counter are pairwise independent,
//! which lets trials run in parallel and re-run individually.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for the given master seed, stream 0.
pub fn master(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent substream `stream` of the master seed.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Per-trial substream inside a namespace.
///
/// Namespaces keep different experiments (or subcommands) on disjoint
/// streams of the same master seed; trial indices stay below 2^40.
pub fn trial(seed: u64, namespace: u64, index: u64) -> ChaCha8Rng {
    debug_assert!(index < 1 << 40);
    substream(seed, (namespace << 40) ^ index)
}
