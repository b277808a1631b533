//! Counter-based randomness.
//!
//! Every random quantity in the crate is a pure function of a seed and a
//! small tuple of integer coordinates, so work can be split across threads
//! in any order and still reproduce bit-identical output.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a list of coordinates into a seed.
pub fn derive_seed(seed: u64, coords: &[u64]) -> u64 {
    let mut h = mix64(seed.wrapping_add(GOLDEN));
    for (k, &c) in coords.iter().enumerate() {
        h = mix64(h ^ c.wrapping_add(GOLDEN.wrapping_mul(k as u64 + 1)));
    }
    h
}

/// Maps 64 random bits to a uniform double in `[0, 1)`.
#[inline]
pub fn to_unit(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Link shock for the unordered pair `{i, j}`. Symmetric in `i` and `j`.
#[inline]
pub fn pair_uniform(seed: u64, i: usize, j: usize) -> f64 {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    let h = mix64(seed.wrapping_add(GOLDEN));
    let h = mix64(h ^ (a as u64));
    let h = mix64(h ^ (b as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93));
    to_unit(h)
}

/// Sequential stream for draws that are not pair-indexed (covariates, treatments).
pub fn stream(seed: u64, coords: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, coords))
}
