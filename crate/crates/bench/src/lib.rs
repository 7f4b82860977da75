//! Fixtures shared by the benchmarks.

use qwpath_core::{CoinSpec, Sampler};

/// A reproducible walk with exactly `n` interior vertices.
pub fn walk_of_size(n: usize, seed: u64) -> CoinSpec {
    let mut s = Sampler::new(seed);
    let chain = s.chain(n);
    let (nu1, nu2) = s.nu_pair();
    s.coins(&chain, nu1, nu2)
}

/// Sizes used across benchmark groups.
pub const SIZES: [usize; 4] = [8, 32, 128, 512];
