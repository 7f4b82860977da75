//! Reproducible random instances.
//!
//! Interior transition probabilities are uniform in `[0.05, 0.95]`, coin
//! phases uniform in `[-pi, pi)` independently on both chiralities, and
//! eigenvalue pairs have `|nu1 - nu2| >= 0.5`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::BirthDeathChain;
use crate::coin::CoinSpec;
use crate::state::{PathSize, StateVector};

pub const P_RANGE: (f64, f64) = (0.05, 0.95);
pub const MIN_NU_SEPARATION: f64 = 0.5;

/// Seeded generator of chains, coins and states.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn size_up_to(&mut self, max_n: usize) -> usize {
        self.rng.random_range(1..=max_n.max(1))
    }

    pub fn chain(&mut self, n: usize) -> BirthDeathChain {
        let interior: Vec<f64> = (0..n)
            .map(|_| self.rng.random_range(P_RANGE.0..=P_RANGE.1))
            .collect();
        BirthDeathChain::from_interior(&interior).expect("sampled probabilities are interior")
    }

    pub fn phase(&mut self) -> f64 {
        self.rng.random_range(-PI..PI)
    }

    pub fn phases(&mut self, len: usize) -> Vec<f64> {
        (0..len).map(|_| self.phase()).collect()
    }

    /// Unit-modulus pair with `|nu1 - nu2| >= 0.5`.
    pub fn nu_pair(&mut self) -> (Complex64, Complex64) {
        loop {
            let nu1 = Complex64::from_polar(1.0, self.phase());
            let nu2 = Complex64::from_polar(1.0, self.phase());
            if (nu1 - nu2).norm() >= MIN_NU_SEPARATION {
                return (nu1, nu2);
            }
        }
    }

    /// Coins realizing `chain` with independent random phases on `w_x(L)` and `w_x(R)`.
    pub fn coins(&mut self, chain: &BirthDeathChain, nu1: Complex64, nu2: Complex64) -> CoinSpec {
        let w = (1..=chain.size().n())
            .map(|x| {
                let l = Complex64::from_polar(chain.q(x).sqrt(), self.phase());
                let r = Complex64::from_polar(chain.p(x).sqrt(), self.phase());
                [l, r]
            })
            .collect();
        CoinSpec::new(nu1, nu2, w).expect("sampled coins are admissible")
    }

    /// A random admissible walk with `1 <= n <= max_n`.
    pub fn walk(&mut self, max_n: usize) -> CoinSpec {
        let n = self.size_up_to(max_n);
        let chain = self.chain(n);
        let (nu1, nu2) = self.nu_pair();
        self.coins(&chain, nu1, nu2)
    }

    /// A random unit state.
    pub fn state(&mut self, size: PathSize) -> StateVector {
        let amps = (0..size.dim())
            .map(|_| Complex64::new(self.rng.random_range(-1.0..1.0), self.rng.random_range(-1.0..1.0)))
            .collect();
        StateVector::from_amplitudes(size, amps)
            .expect("length matches")
            .normalized()
    }
}
