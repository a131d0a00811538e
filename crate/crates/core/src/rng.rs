//! Counter-keyed random streams.
//!
//! Every stochastic step draws from a ChaCha stream keyed by the user seed
//! plus the coordinates of the work item, so results do not depend on
//! scheduling or worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Walk = 1,
    VisitOrder = 2,
    EmbeddingInit = 3,
    Training = 4,
    Split = 5,
    KMeans = 6,
    Synthetic = 7,
    Classifier = 8,
}

/// Independent stream for `(seed, a, b)` within `domain`.
pub fn stream(seed: u64, a: u64, b: u64, domain: Domain) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&a.to_le_bytes());
    key[16..24].copy_from_slice(&b.to_le_bytes());
    key[24..].copy_from_slice(&(domain as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}
