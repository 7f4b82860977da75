//! Isospectral coins and the block coin operator.
//!
//! Every interior vertex carries `C_x = (nu1 - nu2)|w_x><w_x| + nu2 I` with a
//! shared eigenvalue pair; the boundary blocks act on their single arc by
//! `nu1`. A [`CoinSpec`] can only be obtained through validation.

use num_complex::Complex64;

use crate::state::{PathSize, StateVector};
use crate::{Error, Result, NORM_TOL};

/// Interior coin vectors within this distance of unit norm are renormalized.
pub const RENORMALIZE_TOL: f64 = 1e-9;

/// Components below this modulus count as zero for the connectivity check.
const DISCONNECT_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Validated coin data: `(nu1, nu2)` and the unit vectors `w_x = (w_x(L), w_x(R))`
/// for interior `x = 1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinSpec {
    size: PathSize,
    nu1: Complex64,
    nu2: Complex64,
    w: Vec<[Complex64; 2]>,
}

impl CoinSpec {
    /// Validates raw coin data. `w[x-1]` is the vector at interior vertex `x`.
    pub fn new(nu1: Complex64, nu2: Complex64, w: Vec<[Complex64; 2]>) -> Result<Self> {
        let size = PathSize::new(w.len())?;
        for (which, nu) in [("nu1", nu1), ("nu2", nu2)] {
            let modulus = nu.norm();
            if !modulus.is_finite() || (modulus - 1.0).abs() > NORM_TOL {
                return Err(Error::NonUnitModulus { which, modulus });
            }
        }
        if (nu1 - nu2).norm() <= NORM_TOL {
            return Err(Error::EqualEigenvalues);
        }
        let mut checked = Vec::with_capacity(w.len());
        for (i, [l, r]) in w.into_iter().enumerate() {
            let x = i + 1;
            let norm = (l.norm_sqr() + r.norm_sqr()).sqrt();
            if !norm.is_finite() || (norm - 1.0).abs() > RENORMALIZE_TOL {
                return Err(Error::NotUnitVector { x, norm });
            }
            let (l, r) = (l / norm, r / norm);
            if l.norm() < DISCONNECT_TOL || r.norm() < DISCONNECT_TOL {
                return Err(Error::DisconnectingCoin { x });
            }
            checked.push([l, r]);
        }
        Ok(CoinSpec {
            size,
            nu1,
            nu2,
            w: checked,
        })
    }

    /// Eigenvalues given by their arguments `psi1`, `psi2` (radians).
    pub fn from_angles(psi1: f64, psi2: f64, w: Vec<[Complex64; 2]>) -> Result<Self> {
        Self::new(Complex64::from_polar(1.0, psi1), Complex64::from_polar(1.0, psi2), w)
    }

    pub fn size(&self) -> PathSize {
        self.size
    }

    pub fn nu1(&self) -> Complex64 {
        self.nu1
    }

    pub fn nu2(&self) -> Complex64 {
        self.nu2
    }

    /// Principal arguments `(psi1, psi2)`.
    pub fn angles(&self) -> (f64, f64) {
        (self.nu1.arg(), self.nu2.arg())
    }

    /// Interior coin vectors, `x = 1..=n`.
    pub fn interior(&self) -> &[[Complex64; 2]] {
        &self.w
    }

    /// `w_x` for any vertex; the boundary conventions are `w_0 = (0, 1)`
    /// and `w_{n+1} = (1, 0)`.
    pub fn w(&self, x: usize) -> [Complex64; 2] {
        if x == 0 {
            [ZERO, ONE]
        } else if x == self.size.last() {
            [ONE, ZERO]
        } else {
            self.w[x - 1]
        }
    }

    pub fn wl(&self, x: usize) -> Complex64 {
        self.w(x)[0]
    }

    pub fn wr(&self, x: usize) -> Complex64 {
        self.w(x)[1]
    }

    /// Whether `nu2 = -nu1` within tolerance.
    pub fn is_szegedy_type(&self) -> bool {
        (self.nu1 + self.nu2).norm() <= NORM_TOL
    }

    /// The same walk with each `w_x` multiplied by `e^{i gamma_x}`.
    pub fn with_gauge(&self, phases: &[f64]) -> Result<Self> {
        if phases.len() != self.w.len() {
            return Err(Error::DimensionMismatch {
                expected: self.w.len(),
                found: phases.len(),
            });
        }
        let w = self
            .w
            .iter()
            .zip(phases)
            .map(|(&[l, r], &g)| {
                let e = Complex64::from_polar(1.0, g);
                [l * e, r * e]
            })
            .collect();
        Self::new(self.nu1, self.nu2, w)
    }

    /// The 2x2 interior block at vertex `x`.
    pub fn block(&self, x: usize) -> [[Complex64; 2]; 2] {
        let [l, r] = self.w(x);
        let d = self.nu1 - self.nu2;
        [
            [d * l * l.conj() + self.nu2, d * l * r.conj()],
            [d * r * l.conj(), d * r * r.conj() + self.nu2],
        ]
    }
}

/// Applies the block coin operator `C` to `state`.
pub fn apply_coin(spec: &CoinSpec, state: &StateVector) -> Result<StateVector> {
    state.check_size(spec.size)?;
    let mut out = state.clone();
    apply_coin_in_place(spec, out.amplitudes_mut());
    Ok(out)
}

pub(crate) fn apply_coin_in_place(spec: &CoinSpec, amps: &mut [Complex64]) {
    let d = spec.nu1 - spec.nu2;
    let last = amps.len() - 1;
    amps[0] *= spec.nu1;
    amps[last] *= spec.nu1;
    for (i, &[l, r]) in spec.w.iter().enumerate() {
        let (a, b) = (amps[2 * i + 1], amps[2 * i + 2]);
        let proj = d * (l.conj() * a + r.conj() * b);
        amps[2 * i + 1] = proj * l + spec.nu2 * a;
        amps[2 * i + 2] = proj * r + spec.nu2 * b;
    }
}

/// An arbitrary 2x2 unitary, in the `(L, R)` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralCoin {
    m: [[Complex64; 2]; 2],
}

/// `C = (nu1 - nu2)|w1><w1| + nu2 I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinDecomposition {
    pub nu1: Complex64,
    pub nu2: Complex64,
    pub w1: [Complex64; 2],
}

impl CoinDecomposition {
    pub fn reassemble(&self) -> [[Complex64; 2]; 2] {
        let d = self.nu1 - self.nu2;
        let [l, r] = self.w1;
        [
            [d * l * l.conj() + self.nu2, d * l * r.conj()],
            [d * r * l.conj(), d * r * r.conj() + self.nu2],
        ]
    }
}

impl GeneralCoin {
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let residual = unitarity_residual(&m);
        if !residual.is_finite() || residual > NORM_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(GeneralCoin { m })
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    /// Splits the coin as `(nu1 - nu2)|w1><w1| + nu2 I`.
    ///
    /// `nu1` is the eigenvalue whose eigenvector has the larger `|R|`
    /// component; ties go to the smaller principal argument. `w1` is fixed
    /// with `w1(L)` real and nonnegative.
    pub fn spectral_decompose(&self) -> Result<CoinDecomposition> {
        let m = &self.m;
        let half_tr = (m[0][0] + m[1][1]) / 2.0;
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let disc = (half_tr * half_tr - det).sqrt();
        let (ea, eb) = (half_tr + disc, half_tr - disc);
        if (ea - eb).norm() <= NORM_TOL {
            return Err(Error::DegenerateCoin);
        }
        let wa = eigenvector_2x2(m, ea);
        // eigenvectors of a normal matrix are orthogonal
        let wb = [-wa[1].conj(), wa[0].conj()];
        let (ra, rb) = (wa[1].norm(), wb[1].norm());
        let pick_a = if (ra - rb).abs() > NORM_TOL {
            ra > rb
        } else {
            ea.arg() < eb.arg()
        };
        let (nu1, nu2, w1) = if pick_a { (ea, eb, wa) } else { (eb, ea, wb) };
        Ok(CoinDecomposition {
            nu1,
            nu2,
            w1: fix_phase(w1),
        })
    }
}

fn unitarity_residual(m: &[[Complex64; 2]; 2]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let dot: Complex64 = (0..2).map(|k| m[k][i].conj() * m[k][j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).norm());
        }
    }
    worst
}

fn eigenvector_2x2(m: &[[Complex64; 2]; 2], ev: Complex64) -> [Complex64; 2] {
    let from_row0 = [m[0][1], ev - m[0][0]];
    let from_row1 = [ev - m[1][1], m[1][0]];
    let norm = |v: &[Complex64; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let v = if norm(&from_row0) >= norm(&from_row1) {
        from_row0
    } else {
        from_row1
    };
    let n = norm(&v);
    [v[0] / n, v[1] / n]
}

fn fix_phase(w: [Complex64; 2]) -> [Complex64; 2] {
    let anchor = if w[0].norm() > DISCONNECT_TOL { w[0] } else { w[1] };
    let phase = anchor.conj() / anchor.norm();
    [w[0] * phase, w[1] * phase]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::Chirality;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn hadamard_row() -> Vec<[Complex64; 2]> {
        vec![[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]]
    }

    #[test]
    fn accepts_szegedy_coin() {
        let spec = CoinSpec::new(c(1.0, 0.0), c(-1.0, 0.0), hadamard_row()).unwrap();
        assert!(spec.is_szegedy_type());
        assert_eq!(spec.size().n(), 1);
    }

    #[test]
    fn rejects_disconnecting_coin() {
        let err = CoinSpec::new(c(1.0, 0.0), c(-1.0, 0.0), vec![[c(1.0, 0.0), c(0.0, 0.0)]])
            .unwrap_err();
        assert_eq!(err, Error::DisconnectingCoin { x: 1 });
        assert!(err.to_string().contains("disconnecting coin at x=1"));
    }

    #[test]
    fn rejects_equal_eigenvalues() {
        let err = CoinSpec::new(c(1.0, 0.0), c(1.0, 0.0), hadamard_row()).unwrap_err();
        assert_eq!(err, Error::EqualEigenvalues);
    }

    #[test]
    fn rejects_non_unit_modulus() {
        let err = CoinSpec::new(c(1.0, 1e-3), c(-1.0, 0.0), hadamard_row()).unwrap_err();
        assert!(matches!(err, Error::NonUnitModulus { which: "nu1", .. }));
    }

    #[test]
    fn renormalizes_nearly_unit_vectors() {
        let s = FRAC_1_SQRT_2 * (1.0 + 1e-10);
        let spec = CoinSpec::new(c(1.0, 0.0), c(-1.0, 0.0), vec![[c(s, 0.0), c(s, 0.0)]]).unwrap();
        let [l, r] = spec.interior()[0];
        assert!((l.norm_sqr() + r.norm_sqr() - 1.0).abs() < 1e-15);

        let s = FRAC_1_SQRT_2 * (1.0 + 1e-6);
        let err = CoinSpec::new(c(1.0, 0.0), c(-1.0, 0.0), vec![[c(s, 0.0), c(s, 0.0)]]);
        assert!(matches!(err, Err(Error::NotUnitVector { x: 1, .. })));
    }

    #[test]
    fn rejects_empty_interior() {
        let err = CoinSpec::new(c(1.0, 0.0), c(-1.0, 0.0), vec![]).unwrap_err();
        assert_eq!(err, Error::PathTooSmall { n: 0 });
    }

    #[test]
    fn coin_maps_left_to_right_on_szegedy_vertex() {
        let spec = CoinSpec::new(c(1.0, 0.0), c(-1.0, 0.0), hadamard_row()).unwrap();
        let size = spec.size();
        let psi = StateVector::basis(size, 1, Chirality::L).unwrap();
        let out = apply_coin(&spec, &psi).unwrap();
        let expected = StateVector::basis(size, 1, Chirality::R).unwrap();
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn boundary_blocks_multiply_by_nu1() {
        let nu1 = Complex64::from_polar(1.0, 0.4);
        let spec = CoinSpec::new(nu1, c(-1.0, 0.0), hadamard_row()).unwrap();
        let out = apply_coin(&spec, &StateVector::origin(spec.size())).unwrap();
        assert!((out[0] - nu1).norm() < 1e-15);
        let right = StateVector::basis(spec.size(), 2, Chirality::L).unwrap();
        let out = apply_coin(&spec, &right).unwrap();
        assert!((out[3] - nu1).norm() < 1e-15);
    }

    #[test]
    fn coin_rejects_dimension_mismatch() {
        let spec = CoinSpec::new(c(1.0, 0.0), c(-1.0, 0.0), hadamard_row()).unwrap();
        let other = StateVector::origin(PathSize::new(2).unwrap());
        assert!(matches!(
            apply_coin(&spec, &other),
            Err(Error::DimensionMismatch { expected: 4, found: 6 })
        ));
    }

    #[test]
    fn block_matches_operator() {
        let w = vec![[c(0.6, 0.0), c(0.0, 0.8)], [c(0.28, 0.96), c(0.0, 0.0)]];
        assert!(CoinSpec::new(c(1.0, 0.0), c(0.0, 1.0), w).is_err());
        let w = vec![[c(0.6, 0.0), c(0.0, 0.8)], [c(0.28, 0.0), c(0.0, 0.96)]];
        let spec = CoinSpec::new(c(1.0, 0.0), c(0.0, 1.0), w).unwrap();
        let blk = spec.block(2);
        assert!(unitarity_residual(&blk) < 1e-14);
        let psi = StateVector::basis(spec.size(), 2, Chirality::L).unwrap();
        let out = apply_coin(&spec, &psi).unwrap();
        assert!((out[3] - blk[0][0]).norm() < 1e-15);
        assert!((out[4] - blk[1][0]).norm() < 1e-15);
    }

    #[test]
    fn decompose_hadamard() {
        let h = FRAC_1_SQRT_2;
        let coin = GeneralCoin::new([[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]).unwrap();
        let d = coin.spectral_decompose().unwrap();
        // eigenvector of -1 is (sin pi/8, -cos pi/8): larger R component
        assert!((d.nu1 - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((d.nu2 - c(1.0, 0.0)).norm() < 1e-14);
        assert!((d.w1[0] - c(FRAC_PI_8.sin(), 0.0)).norm() < 1e-14);
        assert!((d.w1[1] - c(-FRAC_PI_8.cos(), 0.0)).norm() < 1e-14);
        let back = d.reassemble();
        for i in 0..2 {
            for j in 0..2 {
                assert!((back[i][j] - coin.matrix()[i][j]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn decompose_diagonal() {
        let coin = GeneralCoin::new([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]])
            .unwrap();
        let d = coin.spectral_decompose().unwrap();
        assert!((d.nu1 - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((d.w1[0]).norm() < 1e-15);
        assert!((d.w1[1].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn decompose_rejects_scalar_coin() {
        let coin = GeneralCoin::new([[c(0.0, 1.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]])
            .unwrap();
        assert_eq!(coin.spectral_decompose(), Err(Error::DegenerateCoin));
    }

    #[test]
    fn general_coin_rejects_non_unitary() {
        let err = GeneralCoin::new([[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]);
        assert!(matches!(err, Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn tie_breaks_on_argument() {
        // eigenvectors (1, +-1)/sqrt2 have equal |R|; eigenvalues e^{+-i 0.3}
        let (a, b) = (Complex64::from_polar(1.0, 0.3), Complex64::from_polar(1.0, -0.3));
        let s = (a + b) / 2.0;
        let t = (a - b) / 2.0;
        let coin = GeneralCoin::new([[s, t], [t, s]]).unwrap();
        let d = coin.spectral_decompose().unwrap();
        assert!((d.nu1 - b).norm() < 1e-14);
        let back = d.reassemble();
        assert!((back[0][1] - t).norm() < 1e-12);
    }
}
