//! Hierarchical seeding.
//!
//! A single user seed fans out into independent ChaCha streams addressed by
//! `(replicate, purpose)`. Each work item owns its streams, so results do not
//! depend on scheduling or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Purpose {
    Graph = 1,
    Weights = 2,
    Data = 4,
    Algorithm = 5,
    Bootstrap = 6,
}

/// Stream for one purpose of one replicate. Replicate indices must stay below 2^56.
pub fn stream(seed: u64, replicate: u64, purpose: Purpose) -> Rng {
    debug_assert!(replicate < 1 << 56);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((replicate << 8) | purpose as u64);
    rng
}

/// Plain seeded stream for one-off library calls.
pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
