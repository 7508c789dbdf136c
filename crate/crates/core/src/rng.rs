//! Counter-based random streams keyed by `(seed, stream)`.
//!
//! Work is cut into fixed-size blocks and block `k` always draws from stream
//! `k`, so a parallel run reproduces the serial one exactly.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Draws per stream block.
pub const BLOCK: usize = 4096;

/// The generator for one stream of a seed.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform draw on the open interval (0, 1) with 53 random bits.
#[inline]
pub fn open_unit(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// `n` values `f(u)` for uniforms `u` drawn block-wise in parallel.
pub fn map_uniforms<F>(n: usize, seed: u64, f: F) -> Vec<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    let blocks = n.div_ceil(BLOCK);
    let chunks: Vec<Vec<f64>> = (0..blocks)
        .into_par_iter()
        .map(|k| {
            let len = BLOCK.min(n - k * BLOCK);
            let mut rng = stream(seed, k as u64);
            (0..len).map(|_| f(open_unit(&mut rng))).collect()
        })
        .collect();
    chunks.concat()
}
