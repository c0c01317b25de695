//! Error type shared by all modules of the crate.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::quasiprob::GridSpec;

/// Errors produced anywhere in the crate.
///
/// Variants split into two broad classes: input validation (bad dimensions,
/// out-of-range indices, inadequate truncation, unsupported parameters) and
/// numerical-tolerance failures (a computed quantity violated an invariant it
/// is supposed to satisfy). [`Error::is_tolerance_failure`] reports the class.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("Fock dimension must be at least 2, got {dim}")]
    DimensionTooSmall { dim: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("Fock index {index} out of range for dimension {dim}")]
    FockIndexOutOfRange { index: usize, dim: usize },

    #[error("phase-space point must have finite components, got {alpha}")]
    NonFinitePhasePoint { alpha: C64 },

    #[error(
        "dimension {dim} inadequate for displacement amplitude |alpha| = {alpha_abs:.4}; \
         need at least {required}"
    )]
    TruncationInadequate {
        alpha_abs: f64,
        dim: usize,
        required: usize,
    },

    #[error("state amplitudes have zero norm; cannot normalize")]
    ZeroNorm,

    #[error("state holds {tail:.3e} probability mass in the top two Fock levels (limit {limit:.3e})")]
    TailMassExceeded { tail: f64, limit: f64 },

    #[error("matrix is not Hermitian: max entrywise deviation {defect:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("trace is {trace:.12e}, must equal 1 within {tolerance:.3e}")]
    TraceNotOne { trace: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite within tolerance: eigenvalue bound {min_eigenvalue:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("operator is not unitary: max |U^dag U - I| = {defect:.3e} exceeds {tolerance:.3e}")]
    UnitarityDefect { defect: f64, tolerance: f64 },

    #[error("matrix entries must be finite")]
    NonFiniteMatrix,

    #[error("matrix exponential overflowed; input 1-norm {norm:.3e}")]
    ExpmOverflow { norm: f64 },

    #[error("linear solve failed: {reason}")]
    LinearSolveFailed { reason: String },

    #[error("s = {s} is rejected: the distribution family is singular at s = 1 and undefined beyond")]
    SingularSParameter { s: f64 },

    #[error("series length {k_max} invalid for dimension {dim} (need 1 <= k_max <= dim)")]
    InvalidSeriesLength { k_max: usize, dim: usize },

    #[error(
        "value at alpha = {alpha} has imaginary residue {residue:.3e} above {tolerance:.3e}; \
         this signals a convention or truncation fault"
    )]
    ImaginaryResidue {
        residue: f64,
        tolerance: f64,
        alpha: C64,
    },

    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },

    #[error("grid corner alpha = {corner} needs dimension {required}, have {dim}")]
    GridCornerInadequate {
        corner: C64,
        required: usize,
        dim: usize,
    },

    #[error("grid specs differ: {left:?} vs {right:?}")]
    GridMismatch { left: GridSpec, right: GridSpec },

    #[error("oscillator frequency must be positive and finite, got {omega}")]
    InvalidFrequency { omega: f64 },

    #[error("shot count must be at least 1")]
    NoShots,

    #[error("sampling distribution degenerate: truncated tail mass {tail:.3e} exceeds {limit:.3e}")]
    DegenerateDistribution { tail: f64, limit: f64 },

    #[error("state norm drifted to {norm:.12} (tolerance {tolerance:.3e})")]
    NormDrift { norm: f64, tolerance: f64 },

    #[error("sign calibration failed: {reason}")]
    CalibrationFailed { reason: String },
}

impl Error {
    /// `true` for failures of a numerical tolerance (a computed quantity
    /// violated an invariant), `false` for plain input-validation errors.
    pub fn is_tolerance_failure(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian { .. }
                | Error::TraceNotOne { .. }
                | Error::NotPositiveSemidefinite { .. }
                | Error::UnitarityDefect { .. }
                | Error::NonFiniteMatrix
                | Error::ExpmOverflow { .. }
                | Error::LinearSolveFailed { .. }
                | Error::ImaginaryResidue { .. }
                | Error::NormDrift { .. }
                | Error::DegenerateDistribution { .. }
                | Error::CalibrationFailed { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
