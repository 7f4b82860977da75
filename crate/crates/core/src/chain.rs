//! The walk/chain correspondence.
//!
//! Coins with `p_x = |w_x(R)|^2` define a birth-and-death chain with
//! reflecting walls. Its transition matrix `P`, the symmetric Jacobi matrix
//! `J_RW` and the walk's Hermitian Jacobi matrix `J_QW` are all similar
//! through diagonal matrices built from the reversible measure.

use num_complex::Complex64;

use crate::coin::CoinSpec;
use crate::state::PathSize;
use crate::{Error, Result};

/// Above this size the reversible measure is accumulated in log space.
const LOG_SPACE_THRESHOLD: usize = 200;

/// Reflecting birth-and-death chain on `0..=n+1`. Only `p` is stored;
/// `q_x = 1 - p_x`, so `p_0 = 1`, `p_{n+1} = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BirthDeathChain {
    size: PathSize,
    p: Vec<f64>,
}

impl BirthDeathChain {
    /// From the full array `p_0..=p_{n+1}`; requires `p_0 = 1`, `p_{n+1} = 0`
    /// and `0 < p_x < 1` inside.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.len() < 3 {
            return Err(Error::PathTooSmall {
                n: p.len().saturating_sub(2),
            });
        }
        let size = PathSize::new(p.len() - 2)?;
        if p[0] != 1.0 {
            return Err(Error::InvalidChain {
                x: 0,
                reason: format!("left wall must have p_0 = 1, got {}", p[0]),
            });
        }
        if p[size.last()] != 0.0 {
            return Err(Error::InvalidChain {
                x: size.last(),
                reason: format!("right wall must have p_(n+1) = 0, got {}", p[size.last()]),
            });
        }
        for (x, &px) in p.iter().enumerate().take(size.last()).skip(1) {
            if !px.is_finite() || !(0.0..=1.0).contains(&px) {
                return Err(Error::InvalidChain {
                    x,
                    reason: format!("p_x = {px} is not a probability"),
                });
            }
            if px == 0.0 || px == 1.0 {
                return Err(Error::DisconnectingCoin { x });
            }
        }
        Ok(BirthDeathChain { size, p })
    }

    /// From the interior probabilities `p_1..=p_n`.
    pub fn from_interior(interior: &[f64]) -> Result<Self> {
        let mut p = Vec::with_capacity(interior.len() + 2);
        p.push(1.0);
        p.extend_from_slice(interior);
        p.push(0.0);
        Self::new(p)
    }

    pub fn size(&self) -> PathSize {
        self.size
    }

    pub fn p(&self, x: usize) -> f64 {
        self.p[x]
    }

    pub fn q(&self, x: usize) -> f64 {
        1.0 - self.p[x]
    }

    pub fn ps(&self) -> &[f64] {
        &self.p
    }

    /// `(P phi)(x) = q_x phi(x-1) + p_x phi(x+1)`.
    pub fn apply_transition(&self, phi: &[f64]) -> Vec<f64> {
        let last = self.size.last();
        (0..=last)
            .map(|x| {
                let left = if x > 0 { self.q(x) * phi[x - 1] } else { 0.0 };
                let right = if x < last { self.p(x) * phi[x + 1] } else { 0.0 };
                left + right
            })
            .collect()
    }

    /// Dense transition matrix, row-major.
    pub fn transition_matrix(&self) -> Vec<Vec<f64>> {
        let v = self.size.vertices();
        let mut m = vec![vec![0.0; v]; v];
        for x in 0..v {
            if x + 1 < v {
                m[x][x + 1] = self.p(x);
            }
            if x > 0 {
                m[x][x - 1] = self.q(x);
            }
        }
        m
    }
}

/// Reversible measure `pi` with `pi(x) p_x = pi(x+1) q_{x+1}` and total mass 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ReversibleMeasure {
    pub pi: Vec<f64>,
    /// `C_pi`: total mass of the unnormalized measure with `pi(0) = 1`.
    /// Infinite when it overflows (only possible in the log-space branch).
    pub normalizer: f64,
    pub pi_sqrt: Vec<f64>,
}

impl ReversibleMeasure {
    /// Largest violation of detailed balance.
    pub fn detailed_balance_error(&self, chain: &BirthDeathChain) -> f64 {
        (0..chain.size().last())
            .map(|x| (self.pi[x] * chain.p(x) - self.pi[x + 1] * chain.q(x + 1)).abs())
            .fold(0.0, f64::max)
    }
}

pub fn reversible_measure(chain: &BirthDeathChain) -> ReversibleMeasure {
    let last = chain.size().last();
    let (pi, normalizer) = if chain.size().n() > LOG_SPACE_THRESHOLD {
        let mut log_w = Vec::with_capacity(last + 1);
        log_w.push(0.0);
        for x in 0..last {
            let next = log_w[x] + chain.p(x).ln() - chain.q(x + 1).ln();
            log_w.push(next);
        }
        let top = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let total: f64 = log_w.iter().map(|l| (l - top).exp()).sum();
        let log_c = top + total.ln();
        (
            log_w.iter().map(|l| (l - log_c).exp()).collect::<Vec<_>>(),
            log_c.exp(),
        )
    } else {
        let mut w = Vec::with_capacity(last + 1);
        w.push(1.0);
        for x in 0..last {
            w.push(w[x] * chain.p(x) / chain.q(x + 1));
        }
        let c: f64 = w.iter().sum();
        (w.iter().map(|v| v / c).collect(), c)
    };
    let pi_sqrt = pi.iter().map(|v| v.sqrt()).collect();
    ReversibleMeasure {
        pi,
        normalizer,
        pi_sqrt,
    }
}

/// `p_x = |w_x(R)|^2`, `q_x = |w_x(L)|^2`.
pub fn chain_from_coins(spec: &CoinSpec) -> BirthDeathChain {
    let size = spec.size();
    let mut p = Vec::with_capacity(size.vertices());
    p.push(1.0);
    p.extend(spec.interior().iter().map(|[_, r]| r.norm_sqr()));
    p.push(0.0);
    BirthDeathChain { size, p }
}

/// Coins `w_x = e^{i gamma_x} (sqrt(q_x), sqrt(p_x))`; without `phases` the
/// nonnegative real gauge is used.
pub fn coins_from_chain(
    chain: &BirthDeathChain,
    nu1: Complex64,
    nu2: Complex64,
    phases: Option<&[f64]>,
) -> Result<CoinSpec> {
    let n = chain.size().n();
    if let Some(ph) = phases {
        if ph.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: ph.len(),
            });
        }
    }
    let w = (1..=n)
        .map(|x| {
            let e = phases.map_or(Complex64::new(1.0, 0.0), |ph| Complex64::from_polar(1.0, ph[x - 1]));
            [e * chain.q(x).sqrt(), e * chain.p(x).sqrt()]
        })
        .collect();
    CoinSpec::new(nu1, nu2, w)
}

/// Phases of the complex square-root measure: `g(0) = 1` and
/// `g(x+1) = g(x) * phase(w_x(R) conj(w_{x+1}(L)))`, so that
/// `J_QW = G J_RW G^{-1}` with `G = diag(g)`.
pub fn gauge_phases(spec: &CoinSpec) -> Vec<Complex64> {
    let last = spec.size().last();
    let mut g = Vec::with_capacity(last + 1);
    g.push(Complex64::new(1.0, 0.0));
    for x in 0..last {
        let z = spec.wr(x) * spec.wl(x + 1).conj();
        g.push(g[x] * (z / z.norm()));
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobiKind {
    QuantumWalk,
    RandomWalk,
}

/// Hermitian tridiagonal matrix with zero diagonal; `upper[x]` is entry `(x, x+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiMatrix {
    pub kind: JacobiKind,
    pub upper: Vec<Complex64>,
}

impl JacobiMatrix {
    pub fn dim(&self) -> usize {
        self.upper.len() + 1
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim();
        (0..d)
            .map(|x| {
                let mut s = Complex64::new(0.0, 0.0);
                if x > 0 {
                    s += self.upper[x - 1].conj() * v[x - 1];
                }
                if x + 1 < d {
                    s += self.upper[x] * v[x + 1];
                }
                s
            })
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let d = self.dim();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); d]; d];
        for (x, &z) in self.upper.iter().enumerate() {
            m[x][x + 1] = z;
            m[x + 1][x] = z.conj();
        }
        m
    }

    /// Real off-diagonal (for the random-walk kind).
    pub fn real_upper(&self) -> Vec<f64> {
        self.upper.iter().map(|z| z.re).collect()
    }
}

/// `J_RW` with entries `sqrt(p_x q_{x+1})`.
pub fn jacobi_rw(chain: &BirthDeathChain) -> JacobiMatrix {
    let upper = (0..chain.size().last())
        .map(|x| Complex64::new((chain.p(x) * chain.q(x + 1)).sqrt(), 0.0))
        .collect();
    JacobiMatrix {
        kind: JacobiKind::RandomWalk,
        upper,
    }
}

/// `J_QW` with entries `conj(w_x(R)) w_{x+1}(L)`.
pub fn jacobi_qw(spec: &CoinSpec) -> JacobiMatrix {
    let upper = (0..spec.size().last())
        .map(|x| spec.wr(x).conj() * spec.wl(x + 1))
        .collect();
    JacobiMatrix {
        kind: JacobiKind::QuantumWalk,
        upper,
    }
}
