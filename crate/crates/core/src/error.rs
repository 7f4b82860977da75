use crate::state::Chirality;

/// Errors raised by the spectral engine.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("path needs at least one interior vertex (n >= 1), got n = {n}")]
    PathTooSmall { n: usize },

    #[error("({x}, {chirality}) is not an arc of the path with n = {n}")]
    InvalidArc {
        x: usize,
        chirality: Chirality,
        n: usize,
    },

    #[error("basis offset {offset} out of range for dimension {dim}")]
    OffsetOutOfRange { offset: usize, dim: usize },

    #[error("state is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{which} must have unit modulus, got |{which}| = {modulus}")]
    NonUnitModulus { which: &'static str, modulus: f64 },

    #[error("coin eigenvalues must differ (nu1 = nu2)")]
    EqualEigenvalues,

    #[error("disconnecting coin at x={x}: w_x(L) * w_x(R) must be nonzero")]
    DisconnectingCoin { x: usize },

    #[error("coin vector at x={x} is not a unit vector (norm = {norm})")]
    NotUnitVector { x: usize, norm: f64 },

    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("degenerate coin: both eigenvalues coincide (scalar multiple of the identity)")]
    DegenerateCoin,

    #[error("invalid chain at x={x}: {reason}")]
    InvalidChain { x: usize, reason: String },

    #[error("tridiagonal eigensolver did not converge at index {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("walk spectrum is degenerate: minimal eigenvalue gap {gap:e}")]
    DegenerateWalkSpectrum { gap: f64 },

    #[error("singular denominator 1 + lambda Re(conj(nu2) mu) = {value:e} at m = {m}")]
    SingularDenominator { m: usize, value: f64 },

    #[error("number of time steps must be positive")]
    ZeroSteps,

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("corollary form requires nu2 = -nu1 (got nu1 + nu2 = {residual:e})")]
    NotSzegedy { residual: f64 },

    #[error("spectrum does not belong to this walk: {0}")]
    SpectrumMismatch(String),

    #[error("negative probability {value} at x={x}")]
    NegativeProbability { x: usize, value: f64 },

    #[error("distribution sums to {sum}, expected 1")]
    NotProbability { sum: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
