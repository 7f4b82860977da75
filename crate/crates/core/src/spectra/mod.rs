//! Chain spectra and their lift to eigenpairs of the walk.
//!
//! The chain side is always solved on the real symmetric `J_RW`. Chain
//! eigenvectors `phi_m` and unit walk-side vectors `v_m` are obtained from
//! the unit `J_RW` eigenvectors `y_m` through diagonal similarities:
//! `phi_m = y_m / sqrt(pi)` and `v_m = G y_m` with the gauge phases `G`.

mod tridiag;
mod walk;

pub use tridiag::{bisect_eigenvalues, ql_implicit, sturm_count, TridiagonalEigen};
pub use walk::{
    lift_walk_eigenpairs, procedure_roots, walk_eigenvalues, Branch, WalkMode, WalkSpectrum,
};

use log::debug;
use num_complex::Complex64;

use crate::chain::{chain_from_coins, gauge_phases, jacobi_rw, reversible_measure, BirthDeathChain, ReversibleMeasure};
use crate::coin::CoinSpec;
use crate::{Error, Result};

/// Tolerance for the symmetry checks.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Spectrum of `P_RW` with `lambdas` strictly decreasing.
#[derive(Debug, Clone)]
pub struct ChainSpectrum {
    chain: BirthDeathChain,
    measure: ReversibleMeasure,
    lambdas: Vec<f64>,
    // unit eigenvectors of J_RW with y_m(0) > 0
    rw_vectors: Vec<Vec<f64>>,
    // pi-normalized eigenvectors of P_RW
    phis: Vec<Vec<f64>>,
}

impl ChainSpectrum {
    pub fn chain(&self) -> &BirthDeathChain {
        &self.chain
    }

    pub fn measure(&self) -> &ReversibleMeasure {
        &self.measure
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn lambda(&self, m: usize) -> f64 {
        self.lambdas[m]
    }

    /// Number of eigenvalues, `n + 2`.
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// `phi_m` with `sum_x pi(x) phi_m(x)^2 = 1` and `phi_m(0) > 0`.
    pub fn phi(&self, m: usize) -> &[f64] {
        &self.phis[m]
    }

    pub fn phis(&self) -> &[Vec<f64>] {
        &self.phis
    }

    /// Unit eigenvector of `J_RW` for `lambda_m`, positive at 0.
    pub fn rw_vector(&self, m: usize) -> &[f64] {
        &self.rw_vectors[m]
    }

    /// Unit eigenvectors `v_m` of `J_QW` for the walk `spec`.
    pub fn qw_vectors(&self, spec: &CoinSpec) -> Result<Vec<Vec<Complex64>>> {
        self.check_matches(spec)?;
        let g = gauge_phases(spec);
        Ok(self
            .rw_vectors
            .iter()
            .map(|y| y.iter().zip(&g).map(|(&yx, &gx)| gx * yx).collect())
            .collect())
    }

    /// Errors unless `spec` induces this spectrum's chain.
    pub fn check_matches(&self, spec: &CoinSpec) -> Result<()> {
        let other = chain_from_coins(spec);
        if other.size() != self.chain.size() {
            return Err(Error::SpectrumMismatch(format!(
                "spectrum has n = {}, walk has n = {}",
                self.chain.size().n(),
                other.size().n()
            )));
        }
        let diff = other
            .ps()
            .iter()
            .zip(self.chain.ps())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if diff > 1e-12 {
            return Err(Error::SpectrumMismatch(format!(
                "transition probabilities differ by {diff:e}"
            )));
        }
        Ok(())
    }

    /// `||P phi_m - lambda_m phi_m||_inf / max(1, ||phi_m||_inf)`.
    pub fn residual(&self, m: usize) -> f64 {
        let phi = &self.phis[m];
        let lambda = self.lambdas[m];
        let scale = phi.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        self.chain
            .apply_transition(phi)
            .iter()
            .zip(phi)
            .map(|(a, b)| (a - lambda * b).abs())
            .fold(0.0, f64::max)
            / scale
    }

    pub fn max_residual(&self) -> f64 {
        (0..self.len()).map(|m| self.residual(m)).fold(0.0, f64::max)
    }

    /// Largest `|sum_x pi(x) phi_m(x)^2 - 1|`.
    pub fn normalization_error(&self) -> f64 {
        self.phis
            .iter()
            .map(|phi| {
                let s: f64 = phi.iter().zip(&self.measure.pi).map(|(f, p)| p * f * f).sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Smallest `lambda_m - lambda_{m+1}`.
    pub fn min_gap(&self) -> f64 {
        self.lambdas
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(f64::INFINITY, f64::min)
    }
}

/// Full spectrum of the chain from the symmetric `J_RW`.
pub fn eigensolve_chain(chain: &BirthDeathChain) -> Result<ChainSpectrum> {
    let measure = reversible_measure(chain);
    let off = jacobi_rw(chain).real_upper();
    let diag = vec![0.0; chain.size().vertices()];
    let eig = ql_implicit(&diag, &off)?;

    let mut lambdas = eig.values;
    let mut rw_vectors = eig.vectors;
    lambdas.reverse();
    rw_vectors.reverse();
    for y in &mut rw_vectors {
        if y[0] < 0.0 {
            for v in y.iter_mut() {
                *v = -*v;
            }
        }
    }
    let phis = rw_vectors
        .iter()
        .map(|y| {
            y.iter()
                .zip(&measure.pi_sqrt)
                .map(|(v, s)| v / s)
                .collect()
        })
        .collect();
    let spectrum = ChainSpectrum {
        chain: chain.clone(),
        measure,
        lambdas,
        rw_vectors,
        phis,
    };
    debug!(
        "chain spectrum n={}: min gap {:e}, max residual {:e}",
        chain.size().n(),
        spectrum.min_gap(),
        spectrum.max_residual()
    );
    Ok(spectrum)
}

/// Eigenvalues of `P_RW` in decreasing order by bisection on the
/// non-symmetric transition matrix itself.
pub fn transition_eigenvalues_bisection(chain: &BirthDeathChain) -> Vec<f64> {
    let last = chain.size().last();
    let products: Vec<f64> = (0..last).map(|x| chain.p(x) * chain.q(x + 1)).collect();
    let mut values = bisect_eigenvalues(&vec![0.0; last + 1], &products);
    values.reverse();
    values
}

/// Outcome of the spectral symmetry checks. Lists violations; never fails.
#[derive(Debug, Clone, Default)]
pub struct SymmetryReport {
    /// `max_m |lambda_m + lambda_{n+1-m}|`.
    pub pairing_error: f64,
    /// `max_m min_s max_x |y_{n+1-m}(x) - s (-1)^x y_m(x)|` over unit vectors.
    pub vector_error: f64,
    pub has_zero: bool,
    pub n_is_odd: bool,
    pub top_error: f64,
    pub bottom_error: f64,
    pub min_gap: f64,
    pub violations: Vec<String>,
}

impl SymmetryReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_spectral_symmetry(spectrum: &ChainSpectrum) -> SymmetryReport {
    let mut report = SymmetryReport::default();
    let len = spectrum.len();
    let n = len - 2;
    let lambdas = spectrum.lambdas();

    report.pairing_error = (0..len)
        .map(|m| (lambdas[m] + lambdas[len - 1 - m]).abs())
        .fold(0.0, f64::max);
    if report.pairing_error > SYMMETRY_TOL {
        report.violations.push(format!(
            "eigenvalues not symmetric about 0: max |lambda_m + lambda_(n+1-m)| = {:e}",
            report.pairing_error
        ));
    }

    report.vector_error = (0..len)
        .map(|m| {
            let y = spectrum.rw_vector(m);
            let z = spectrum.rw_vector(len - 1 - m);
            [1.0, -1.0]
                .iter()
                .map(|s| {
                    y.iter()
                        .zip(z)
                        .enumerate()
                        .map(|(x, (a, b))| {
                            let alt = if x % 2 == 0 { 1.0 } else { -1.0 };
                            (b - s * alt * a).abs()
                        })
                        .fold(0.0, f64::max)
                })
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    if report.vector_error > SYMMETRY_TOL {
        report.violations.push(format!(
            "eigenvector of -lambda is not the alternating-sign eigenvector of lambda (error {:e})",
            report.vector_error
        ));
    }

    report.n_is_odd = n % 2 == 1;
    report.has_zero = lambdas.iter().any(|l| l.abs() <= SYMMETRY_TOL);
    if report.has_zero != report.n_is_odd {
        report.violations.push(format!(
            "0 in spectrum is {} but n = {n} is {}",
            report.has_zero,
            if report.n_is_odd { "odd" } else { "even" }
        ));
    }

    report.top_error = (lambdas[0] - 1.0).abs();
    report.bottom_error = (lambdas[len - 1] + 1.0).abs();
    if report.top_error > SYMMETRY_TOL {
        report.violations.push(format!("largest eigenvalue {} is not 1", lambdas[0]));
    }
    if report.bottom_error > SYMMETRY_TOL {
        report
            .violations
            .push(format!("smallest eigenvalue {} is not -1", lambdas[len - 1]));
    }
    if spectrum.rw_vector(0).iter().any(|&v| v <= 0.0) {
        report
            .violations
            .push("eigenvector of lambda = 1 does not have constant sign".to_string());
    }

    report.min_gap = spectrum.min_gap();
    if report.min_gap <= 1e-12 {
        report
            .violations
            .push(format!("spectrum is not simple: minimal gap {:e}", report.min_gap));
    }
    report
}
