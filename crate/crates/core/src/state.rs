//! Arc-basis state space of the path `P_{n+2}`.
//!
//! The basis is `|0,R>, |1,L>, |1,R>, ..., |n,L>, |n,R>, |n+1,L>`: the two
//! boundary vertices carry only the chirality that points into the path.
//! Interior vertex `x` occupies offsets `2x-1` (L) and `2x` (R).

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::distribution::{Distribution, Provenance};
use crate::{Error, Result, NORM_TOL};

/// Number of interior vertices `n`; the path has `n + 2` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PathSize(usize);

impl PathSize {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::PathTooSmall { n });
        }
        Ok(PathSize(n))
    }

    /// Interior vertex count `n`.
    pub fn n(self) -> usize {
        self.0
    }

    pub fn vertices(self) -> usize {
        self.0 + 2
    }

    /// Dimension `2n + 2` of the arc space.
    pub fn dim(self) -> usize {
        2 * self.0 + 2
    }

    /// Index of the right boundary vertex, `n + 1`.
    pub fn last(self) -> usize {
        self.0 + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chirality {
    L,
    R,
}

impl fmt::Display for Chirality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chirality::L => f.write_str("L"),
            Chirality::R => f.write_str("R"),
        }
    }
}

/// A valid arc `(x, J)`; `(0, L)` and `(n+1, R)` are excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArcIndex {
    pub x: usize,
    pub chirality: Chirality,
}

/// Offset of `(x, J)` in the canonical ordering.
pub fn basis_index(size: PathSize, x: usize, chirality: Chirality) -> Result<usize> {
    let invalid = Error::InvalidArc {
        x,
        chirality,
        n: size.n(),
    };
    match chirality {
        Chirality::L if x == 0 || x > size.last() => Err(invalid),
        Chirality::R if x >= size.last() => Err(invalid),
        Chirality::L => Ok(2 * x - 1),
        Chirality::R => Ok(2 * x),
    }
}

/// Inverse of [`basis_index`].
pub fn basis_unindex(size: PathSize, offset: usize) -> Result<ArcIndex> {
    if offset >= size.dim() {
        return Err(Error::OffsetOutOfRange {
            offset,
            dim: size.dim(),
        });
    }
    Ok(if offset.is_multiple_of(2) {
        ArcIndex {
            x: offset / 2,
            chirality: Chirality::R,
        }
    } else {
        ArcIndex {
            x: offset.div_ceil(2),
            chirality: Chirality::L,
        }
    })
}

/// Complex amplitudes over the arc basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    size: PathSize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zeros(size: PathSize) -> Self {
        StateVector {
            size,
            amps: vec![Complex64::new(0.0, 0.0); size.dim()],
        }
    }

    pub fn from_amplitudes(size: PathSize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != size.dim() {
            return Err(Error::DimensionMismatch {
                expected: size.dim(),
                found: amps.len(),
            });
        }
        Ok(StateVector { size, amps })
    }

    /// The basis vector `|x, J>`.
    pub fn basis(size: PathSize, x: usize, chirality: Chirality) -> Result<Self> {
        let mut s = Self::zeros(size);
        let i = basis_index(size, x, chirality)?;
        s.amps[i] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// `|0, R>`, the initial state used throughout.
    pub fn origin(size: PathSize) -> Self {
        let mut s = Self::zeros(size);
        s.amps[0] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn size(&self) -> PathSize {
        self.size
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn amp(&self, x: usize, chirality: Chirality) -> Complex64 {
        basis_index(self.size, x, chirality)
            .map(|i| self.amps[i])
            .unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self, other>`, antilinear in `self`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&mut self, factor: Complex64) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }

    pub fn normalized(mut self) -> Self {
        let norm = self.norm();
        if norm > 0.0 {
            self.scale(Complex64::new(1.0 / norm, 0.0));
        }
        self
    }

    /// Entrywise maximum of `|self - other|`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_size(&self, size: PathSize) -> Result<()> {
        if self.size != size {
            return Err(Error::DimensionMismatch {
                expected: size.dim(),
                found: self.amps.len(),
            });
        }
        Ok(())
    }

    /// Per-vertex probabilities without a normalization check.
    pub(crate) fn vertex_weights(&self) -> Vec<f64> {
        vertex_weights(self.size, &self.amps)
    }
}

impl Index<usize> for StateVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.amps[i]
    }
}

impl IndexMut<usize> for StateVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.amps[i]
    }
}

pub(crate) fn vertex_weights(size: PathSize, amps: &[Complex64]) -> Vec<f64> {
    let mut out = vec![0.0; size.vertices()];
    for (i, a) in amps.iter().enumerate() {
        out[i.div_ceil(2)] += a.norm_sqr();
    }
    out
}

/// `x -> |amp(x,L)|^2 + |amp(x,R)|^2` for a unit-norm state.
pub fn position_marginal(state: &StateVector) -> Result<Distribution> {
    let norm = state.norm();
    if (norm * norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Distribution::new(state.vertex_weights(), Provenance::Marginal)
}
