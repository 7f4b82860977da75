//! Spectral engine for discrete-time quantum walks on the finite path.
//!
//! A walk on the path with vertices `0..=n+1` is driven by `U = S C`, a
//! flip-flop shift after a block coin. When every interior coin shares one
//! eigenvalue pair `(nu1, nu2)`, the walk is determined by a reflecting
//! birth-and-death chain (`p_x = |w_x(R)|^2`), and its time-averaged and
//! stationary distributions follow from the chain's spectrum.
//!
//! Modules:
//! - [`state`]: arc basis, state vectors and position marginals;
//! - [`coin`]: isospectral coin descriptions and the coin operator;
//! - [`evolution`]: matrix-free `U = S C` stepping and the Cesàro oracle;
//! - [`chain`]: the walk/chain correspondence, reversible measure, Jacobi matrices;
//! - [`spectra`]: tridiagonal eigensolvers and lifting to eigenpairs of `U`;
//! - [`distribution`]: closed-form time averages and stationary distributions;
//! - [`ehrenfest`]: exact Krawtchouk arithmetic for the Ehrenfest chain;
//! - [`sample`]: seeded random instances for tests and self-checks.

pub mod chain;
pub mod coin;
pub mod distribution;
pub mod ehrenfest;
mod error;
pub mod evolution;
pub mod sample;
pub mod spectra;
pub mod state;

pub use num_complex::Complex64;

pub use chain::{BirthDeathChain, JacobiKind, JacobiMatrix, ReversibleMeasure};
pub use coin::{CoinSpec, GeneralCoin};
pub use distribution::{Distribution, Provenance, RootLabel};
pub use error::{Error, Result};
pub use evolution::{CesaroReport, EvolutionRecord, Walk};
pub use sample::Sampler;
pub use spectra::{Branch, ChainSpectrum, SymmetryReport, WalkMode, WalkSpectrum};
pub use state::{ArcIndex, Chirality, PathSize, StateVector};

/// Tolerance for unit-norm and unit-modulus checks.
pub const NORM_TOL: f64 = 1e-12;
