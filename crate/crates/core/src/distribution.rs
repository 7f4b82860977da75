//! Time-averaged and stationary position distributions.
//!
//! Four routes to the long-time average `pbar(x)` from the initial state
//! `|0,R>`:
//! - [`time_average_spectral`]: eigenvector weights of `U`;
//! - [`time_average_jacobi`]: the same sum over both roots at each `lambda_m`,
//!   written with `|v_m|^2` only;
//! - [`time_average_theorem`]: the single-root form in terms of `phi_m`;
//! - [`time_average_szegedy`]: its specialization to `nu2 = -nu1`.
//!
//! All loops run over ascending `m`, then ascending `x`.

use num_complex::Complex64;

use crate::spectra::{walk_eigenvalues, ChainSpectrum, WalkSpectrum};
use crate::{Error, Result, NORM_TOL};

/// Floating dust below zero down to this value is clamped.
pub const NEGATIVE_CLAMP: f64 = 1e-14;
/// Allowed deviation of the total mass from 1.
pub const SUM_TOL: f64 = 1e-10;
/// `|1 + lambda Re(conj(nu2) mu)|` below this is treated as singular.
pub const DENOMINATOR_TOL: f64 = 1e-12;

/// Where a distribution came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Theorem,
    Corollary,
    Spectral,
    Jacobi,
    Cesaro,
    /// Stationary distribution of index `m`.
    Stationary(usize),
    Ehrenfest,
    Marginal,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::Theorem => f.write_str("theorem"),
            Provenance::Corollary => f.write_str("szegedy"),
            Provenance::Spectral => f.write_str("spectral"),
            Provenance::Jacobi => f.write_str("jacobi"),
            Provenance::Cesaro => f.write_str("cesaro"),
            Provenance::Stationary(m) => write!(f, "stationary({m})"),
            Provenance::Ehrenfest => f.write_str("ehrenfest"),
            Provenance::Marginal => f.write_str("marginal"),
        }
    }
}

/// Probability vector over the vertices `0..=n+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
    provenance: Provenance,
}

impl Distribution {
    /// Clamps entries in `[-1e-14, 0)` to zero; rejects more negative
    /// entries and totals off 1 by more than `1e-10`.
    pub fn new(mut probs: Vec<f64>, provenance: Provenance) -> Result<Self> {
        for (x, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() || *p < -NEGATIVE_CLAMP {
                return Err(Error::NegativeProbability { x, value: *p });
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::NotProbability { sum });
        }
        Ok(Distribution { probs, provenance })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// `max_x |self(x) - other(x)|`; infinite on length mismatch.
    pub fn sup_distance(&self, other: &Distribution) -> f64 {
        if self.probs.len() != other.probs.len() {
            return f64::INFINITY;
        }
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Which root of the quadratic at each `lambda_m` the single-root forms use.
/// The same label is applied at every `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RootLabel {
    #[default]
    Plus,
    Minus,
}

impl RootLabel {
    pub fn pick(self, roots: [Complex64; 2]) -> Complex64 {
        match self {
            RootLabel::Plus => roots[0],
            RootLabel::Minus => roots[1],
        }
    }
}

/// `sum over all modes (|u_{x,L}|^2 + |u_{x,R}|^2) |u_{0,R}|^2`.
pub fn time_average_spectral(ws: &WalkSpectrum) -> Result<Distribution> {
    let vertices = ws.size().vertices();
    let mut acc = vec![0.0; vertices];
    for md in ws.modes() {
        let amps = md.vector.amplitudes();
        let start = amps[0].norm_sqr();
        for (i, a) in amps.iter().enumerate() {
            acc[i.div_ceil(2)] += a.norm_sqr() * start;
        }
    }
    Distribution::new(acc, Provenance::Spectral)
}

/// `R_m = lambda_m Re(conj(nu2) mu)` and the checked denominator `1 + R_m`.
fn shifted_denominator(m: usize, lambda: f64, nu2: Complex64, mu: Complex64) -> Result<(f64, f64)> {
    let r = lambda * (nu2.conj() * mu).re;
    let den = 1.0 + r;
    if den.abs() < DENOMINATOR_TOL {
        log::warn!("singular denominator at m={m}: lambda={lambda}, mu={mu}");
        return Err(Error::SingularDenominator { m, value: den });
    }
    Ok((r, den))
}

/// Both roots at each interior `lambda_m`, with
/// `|u(x)|^2 = [(1+2R)|v(x)|^2 + p_{x-1}|v(x-1)|^2 + q_{x+1}|v(x+1)|^2] / (2(1+R))`.
pub fn time_average_jacobi(spectrum: &ChainSpectrum, nu1: Complex64, nu2: Complex64) -> Result<Distribution> {
    let chain = spectrum.chain();
    let last = chain.size().last();
    let mut acc = vec![0.0; last + 1];
    for m in 0..=last {
        let v2: Vec<f64> = spectrum.rw_vector(m).iter().map(|y| y * y).collect();
        if m == 0 || m == last {
            for x in 0..=last {
                acc[x] += v2[x] * v2[0];
            }
            continue;
        }
        let lambda = spectrum.lambda(m);
        for mu in walk_eigenvalues(lambda, nu1, nu2) {
            let (r, den) = shifted_denominator(m, lambda, nu2, mu)?;
            let weight = |x: usize| {
                let left = if x > 0 { chain.p(x - 1) * v2[x - 1] } else { 0.0 };
                let right = if x < last { chain.q(x + 1) * v2[x + 1] } else { 0.0 };
                ((1.0 + 2.0 * r) * v2[x] + left + right) / (2.0 * den)
            };
            let start = weight(0);
            for x in 0..=last {
                acc[x] += weight(x) * start;
            }
        }
    }
    Distribution::new(acc, Provenance::Jacobi)
}

/// Single-root closed form with `mu_m` chosen by [`RootLabel::Plus`].
pub fn time_average_theorem(spectrum: &ChainSpectrum, nu1: Complex64, nu2: Complex64) -> Result<Distribution> {
    time_average_theorem_with(spectrum, nu1, nu2, RootLabel::Plus)
}

/// `pbar(x) = pi(0) pi(x) [2 phi_0(0)^2 phi_0(x)^2 + sum_{m=1}^{n} w_m B_m(x)]`
/// with `K = 1 + 2R + lambda^2`, `w_m = K phi_m(0)^2 / (2(1+R)^2)` and
/// `B_m(x) = K phi_m(x)^2 + p_x q_x (phi_m(x-1) - phi_m(x+1))^2`.
pub fn time_average_theorem_with(
    spectrum: &ChainSpectrum,
    nu1: Complex64,
    nu2: Complex64,
    label: RootLabel,
) -> Result<Distribution> {
    let chain = spectrum.chain();
    let last = chain.size().last();
    let pi = &spectrum.measure().pi;
    let phi0 = spectrum.phi(0);
    let mut bracket: Vec<f64> = (0..=last)
        .map(|x| 2.0 * phi0[0] * phi0[0] * phi0[x] * phi0[x])
        .collect();
    for m in 1..last {
        let lambda = spectrum.lambda(m);
        let mu = label.pick(walk_eigenvalues(lambda, nu1, nu2));
        let (r, den) = shifted_denominator(m, lambda, nu2, mu)?;
        let k = 1.0 + 2.0 * r + lambda * lambda;
        let phi = spectrum.phi(m);
        let w = k * phi[0] * phi[0] / (2.0 * den * den);
        for x in 0..=last {
            bracket[x] += w * (k * phi[x] * phi[x] + difference_term(spectrum, phi, x));
        }
    }
    let probs = (0..=last).map(|x| pi[0] * pi[x] * bracket[x]).collect();
    Distribution::new(probs, Provenance::Theorem)
}

/// `p_x q_x (phi(x-1) - phi(x+1))^2`, zero at both walls.
fn difference_term(spectrum: &ChainSpectrum, phi: &[f64], x: usize) -> f64 {
    let chain = spectrum.chain();
    if x == 0 || x == chain.size().last() {
        return 0.0;
    }
    let d = phi[x - 1] - phi[x + 1];
    chain.p(x) * chain.q(x) * d * d
}

/// Errors unless `nu2 = -nu1`.
pub fn check_szegedy(nu1: Complex64, nu2: Complex64) -> Result<()> {
    let residual = (nu1 + nu2).norm();
    if residual > NORM_TOL {
        return Err(Error::NotSzegedy { residual });
    }
    Ok(())
}

/// The `nu2 = -nu1` form:
/// `pbar(x) = pi(0) pi(x) [2 phi_0(0)^2 phi_0(x)^2 + sum_m phi_m(0)^2 / (2(1 - lambda_m^2)) B_m(x)]`
/// with `B_m(x) = (1 - lambda_m^2) phi_m(x)^2 + p_x q_x (phi_m(x-1) - phi_m(x+1))^2`.
pub fn time_average_szegedy(spectrum: &ChainSpectrum) -> Result<Distribution> {
    let chain = spectrum.chain();
    let last = chain.size().last();
    let pi = &spectrum.measure().pi;
    let phi0 = spectrum.phi(0);
    let mut bracket: Vec<f64> = (0..=last)
        .map(|x| 2.0 * phi0[0] * phi0[0] * phi0[x] * phi0[x])
        .collect();
    for m in 1..last {
        let lambda = spectrum.lambda(m);
        let gap = 1.0 - lambda * lambda;
        if gap.abs() < DENOMINATOR_TOL {
            return Err(Error::SingularDenominator { m, value: gap });
        }
        let phi = spectrum.phi(m);
        let w = phi[0] * phi[0] / (2.0 * gap);
        for x in 0..=last {
            bracket[x] += w * (gap * phi[x] * phi[x] + difference_term(spectrum, phi, x));
        }
    }
    let probs = (0..=last).map(|x| pi[0] * pi[x] * bracket[x]).collect();
    Distribution::new(probs, Provenance::Corollary)
}

/// The `ceil(n/2) + 1` stationary distributions `x -> |u_{+m}(x)|^2`:
/// `pi` for `m = 0`, otherwise
/// `pi(x) [K phi_m(x)^2 + p_x q_x (phi_m(x-1) - phi_m(x+1))^2] / (2(1+R))`.
pub fn stationary_distributions(
    spectrum: &ChainSpectrum,
    nu1: Complex64,
    nu2: Complex64,
) -> Result<Vec<Distribution>> {
    let chain = spectrum.chain();
    let n = chain.size().n();
    let last = chain.size().last();
    let pi = &spectrum.measure().pi;
    let count = n.div_ceil(2) + 1;
    let mut out = Vec::with_capacity(count);
    for m in 0..count {
        let phi = spectrum.phi(m);
        let probs = if m == 0 {
            (0..=last).map(|x| pi[x] * phi[x] * phi[x]).collect()
        } else {
            let lambda = spectrum.lambda(m);
            let mu = RootLabel::Plus.pick(walk_eigenvalues(lambda, nu1, nu2));
            let (r, den) = shifted_denominator(m, lambda, nu2, mu)?;
            let k = 1.0 + 2.0 * r + lambda * lambda;
            (0..=last)
                .map(|x| pi[x] * (k * phi[x] * phi[x] + difference_term(spectrum, phi, x)) / (2.0 * den))
                .collect()
        };
        out.push(Distribution::new(probs, Provenance::Stationary(m))?);
    }
    Ok(out)
}
