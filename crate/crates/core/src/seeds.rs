//! Seed discipline: every random consumer draws from its own named
//! substream of a single master seed, so adding a consumer never perturbs
//! the others.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Substream names used across the crate.
pub mod streams {
    pub const WEIGHTS: &str = "weights";
    pub const TIES: &str = "ties";
    pub const SHIFT: &str = "shift";
    pub const INIT: &str = "init";
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Seed of the substream `name` of `master`.
pub fn substream(master: u64, name: &str) -> u64 {
    splitmix64(master ^ splitmix64(fnv1a(name.as_bytes())))
}

/// Seed derived from `base` and an ordered tuple of integer keys.
pub fn keyed(base: u64, keys: &[u64]) -> u64 {
    keys.iter()
        .fold(splitmix64(base), |h, &k| splitmix64(h ^ splitmix64(k)))
}

pub fn rng(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

pub fn named_rng(master: u64, name: &str) -> SimRng {
    rng(substream(master, name))
}
