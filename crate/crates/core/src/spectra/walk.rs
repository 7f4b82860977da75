//! Eigenpairs of `U = S C` lifted from the chain spectrum.
//!
//! With `a_m = sum_x v_m(x) (w_x(L) |x,L> + w_x(R) |x,R>)` and `b_m = S a_m`,
//! the span of `{a_m, b_m}` is `U`-invariant. For `lambda_m = +-1` the two
//! coincide up to sign and `a_m` itself has eigenvalue `+-nu1`. Otherwise
//! `nu2 a_m + mu b_m` is an eigenvector for each root `mu` of
//! `mu^2 - (nu1 - nu2) lambda_m mu - nu1 nu2 = 0`.

use num_complex::Complex64;

use crate::coin::CoinSpec;
use crate::evolution::{apply_shift, step};
use crate::spectra::ChainSpectrum;
use crate::state::{basis_unindex, PathSize, StateVector};
use crate::{Error, Result};

/// Pairwise separation of the walk eigenvalues below which the lift is rejected.
pub const MIN_WALK_GAP: f64 = 1e-10;

const LABEL_TIE: f64 = 1e-12;

/// Which eigenvector of the invariant plane a mode is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `lambda_0 = 1`, eigenvalue `nu1`.
    Top,
    /// `lambda_{n+1} = -1`, eigenvalue `-nu1`.
    Bottom,
    Plus,
    Minus,
}

/// Roots `[mu_plus, mu_minus]` of `mu^2 - (nu1 - nu2) lambda mu - nu1 nu2`.
/// `mu_plus` has the larger `Im(conj(nu2) mu)`, ties going to the larger real part.
pub fn walk_eigenvalues(lambda: f64, nu1: Complex64, nu2: Complex64) -> [Complex64; 2] {
    let b = (nu1 - nu2) * lambda;
    let disc = (b * b + 4.0 * nu1 * nu2).sqrt();
    // larger-modulus root first, the other from the product -nu1 nu2
    let q = if (b + disc).norm() >= (b - disc).norm() {
        (b + disc) * 0.5
    } else {
        (b - disc) * 0.5
    };
    let r1 = q;
    let r2 = -nu1 * nu2 / q;
    let z1 = nu2.conj() * r1;
    let z2 = nu2.conj() * r2;
    let first_is_plus = if (z1.im - z2.im).abs() > LABEL_TIE {
        z1.im > z2.im
    } else {
        z1.re >= z2.re
    };
    if first_is_plus {
        [r1, r2]
    } else {
        [r2, r1]
    }
}

/// The same two roots by rescaling, mapping to the unit circle and rotating:
/// `c e^{+-i theta}` with `c = -i nu1^{1/2} nu2^{1/2}` and
/// `cos theta = -Im(nu1^{1/2} conj(nu2^{1/2})) lambda`, principal square roots.
/// Unlabelled; `[c e^{i theta}, c e^{-i theta}]`.
pub fn procedure_roots(lambda: f64, nu1: Complex64, nu2: Complex64) -> [Complex64; 2] {
    let (alpha, beta) = (nu1.sqrt(), nu2.sqrt());
    let cos_theta = cos_theta(lambda, nu1, nu2);
    let theta = cos_theta.acos();
    let c = Complex64::new(0.0, -1.0) * alpha * beta;
    [
        c * Complex64::from_polar(1.0, theta),
        c * Complex64::from_polar(1.0, -theta),
    ]
}

/// `cos theta_m = -Im(nu1^{1/2} conj(nu2^{1/2})) lambda_m`, clamped to `[-1, 1]`.
pub fn cos_theta(lambda: f64, nu1: Complex64, nu2: Complex64) -> f64 {
    let s = (nu1.sqrt() * nu2.sqrt().conj()).im;
    (-s * lambda).clamp(-1.0, 1.0)
}

/// One normalized eigenvector of `U`.
#[derive(Debug, Clone)]
pub struct WalkMode {
    /// Chain index of the invariant plane.
    pub m: usize,
    pub branch: Branch,
    pub lambda: f64,
    pub mu: Complex64,
    pub vector: StateVector,
}

/// All `2n + 2` eigenpairs of `U`, ordered `Top, (Plus, Minus) for m = 1..=n, Bottom`.
#[derive(Debug, Clone)]
pub struct WalkSpectrum {
    size: PathSize,
    nu1: Complex64,
    nu2: Complex64,
    lambdas: Vec<f64>,
    a: Vec<StateVector>,
    b: Vec<StateVector>,
    thetas: Vec<f64>,
    modes: Vec<WalkMode>,
}

impl WalkSpectrum {
    pub fn size(&self) -> PathSize {
        self.size
    }

    pub fn nu1(&self) -> Complex64 {
        self.nu1
    }

    pub fn nu2(&self) -> Complex64 {
        self.nu2
    }

    /// Principal arguments `(psi1, psi2)` of the coin eigenvalues.
    pub fn angles(&self) -> (f64, f64) {
        (self.nu1.arg(), self.nu2.arg())
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn a(&self, m: usize) -> &StateVector {
        &self.a[m]
    }

    pub fn b(&self, m: usize) -> &StateVector {
        &self.b[m]
    }

    /// `theta_m` in `[0, pi]` for every chain index.
    pub fn theta(&self, m: usize) -> f64 {
        self.thetas[m]
    }

    pub fn modes(&self) -> &[WalkMode] {
        &self.modes
    }

    pub fn mode(&self, m: usize, branch: Branch) -> Option<&WalkMode> {
        self.modes.iter().find(|md| md.m == m && md.branch == branch)
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.modes.iter().map(|md| md.mu).collect()
    }

    /// Smallest chord distance between two eigenvalues.
    pub fn min_gap(&self) -> f64 {
        min_circle_gap(&self.eigenvalues())
    }

    /// `max ||U u - mu u||_inf` over all modes.
    pub fn max_residual(&self, spec: &CoinSpec) -> Result<f64> {
        let mut worst = 0.0f64;
        for md in &self.modes {
            let mut target = md.vector.clone();
            target.scale(md.mu);
            worst = worst.max(step(spec, &md.vector)?.max_abs_diff(&target));
        }
        Ok(worst)
    }

    /// `max |<u_i, u_j> - delta_ij|`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, u) in self.modes.iter().enumerate() {
            for (j, v) in self.modes.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((u.vector.inner(&v.vector) - target).norm());
            }
        }
        worst
    }

    /// `U^t state = sum mu^t u <u, state>`.
    pub fn apply_power(&self, state: &StateVector, t: u32) -> Result<StateVector> {
        state.check_size(self.size)?;
        let mut out = StateVector::zeros(self.size);
        for md in &self.modes {
            let coeff = md.mu.powu(t) * md.vector.inner(state);
            for (o, u) in out.amplitudes_mut().iter_mut().zip(md.vector.amplitudes()) {
                *o += coeff * u;
            }
        }
        Ok(out)
    }
}

fn min_circle_gap(mus: &[Complex64]) -> f64 {
    if mus.len() < 2 {
        return f64::INFINITY;
    }
    let mut sorted = mus.to_vec();
    sorted.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    let mut gap = (sorted[0] - sorted[sorted.len() - 1]).norm();
    for w in sorted.windows(2) {
        gap = gap.min((w[1] - w[0]).norm());
    }
    gap
}

/// Builds every eigenpair of `U` from the chain spectrum of `spec`.
pub fn lift_walk_eigenpairs(spec: &CoinSpec, spectrum: &ChainSpectrum) -> Result<WalkSpectrum> {
    spectrum.check_matches(spec)?;
    let size = spec.size();
    let (nu1, nu2) = (spec.nu1(), spec.nu2());
    let last = size.last();
    let vs = spectrum.qw_vectors(spec)?;

    let mut a = Vec::with_capacity(last + 1);
    let mut b = Vec::with_capacity(last + 1);
    for v in &vs {
        let amps = (0..size.dim())
            .map(|i| {
                let arc = basis_unindex(size, i).expect("offset below dim");
                let w = spec.w(arc.x);
                let wj = match arc.chirality {
                    crate::state::Chirality::L => w[0],
                    crate::state::Chirality::R => w[1],
                };
                v[arc.x] * wj
            })
            .collect();
        let am = StateVector::from_amplitudes(size, amps)?;
        b.push(apply_shift(&am));
        a.push(am);
    }

    let lambdas = spectrum.lambdas().to_vec();
    let thetas = lambdas
        .iter()
        .map(|&l| cos_theta(l, nu1, nu2).acos())
        .collect();

    let mut modes = Vec::with_capacity(size.dim());
    modes.push(WalkMode {
        m: 0,
        branch: Branch::Top,
        lambda: lambdas[0],
        mu: nu1,
        vector: a[0].clone(),
    });
    for m in 1..last {
        let lambda = lambdas[m];
        let roots = walk_eigenvalues(lambda, nu1, nu2);
        for (branch, mu) in [(Branch::Plus, roots[0]), (Branch::Minus, roots[1])] {
            let norm_sqr = 2.0 * (1.0 + lambda * (nu2.conj() * mu).re);
            if norm_sqr.abs() < 1e-12 {
                return Err(Error::SingularDenominator {
                    m,
                    value: norm_sqr / 2.0,
                });
            }
            let scale = 1.0 / norm_sqr.sqrt();
            let amps = a[m]
                .amplitudes()
                .iter()
                .zip(b[m].amplitudes())
                .map(|(x, y)| (nu2 * x + mu * y) * scale)
                .collect();
            modes.push(WalkMode {
                m,
                branch,
                lambda,
                mu,
                vector: StateVector::from_amplitudes(size, amps)?,
            });
        }
    }
    modes.push(WalkMode {
        m: last,
        branch: Branch::Bottom,
        lambda: lambdas[last],
        mu: -nu1,
        vector: a[last].clone(),
    });

    let ws = WalkSpectrum {
        size,
        nu1,
        nu2,
        lambdas,
        a,
        b,
        thetas,
        modes,
    };
    let gap = ws.min_gap();
    if gap < MIN_WALK_GAP {
        return Err(Error::DegenerateWalkSpectrum { gap });
    }
    Ok(ws)
}
