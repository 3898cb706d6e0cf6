//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by subspace construction, waveform design, estimation and
/// the experiment harness.
#[derive(Error, Debug)]
pub enum Error {
    /// A matrix offered as a basis source is numerically rank deficient.
    #[error("rank deficient: smallest singular value {smallest:.3e} below {threshold:.3e}")]
    RankDeficient { smallest: f64, threshold: f64 },

    /// Columns are not orthonormal within tolerance.
    #[error("columns not orthonormal (Gram defect {defect:.3e})")]
    NotOrthonormal { defect: f64 },

    /// A matrix contains non-finite entries.
    #[error("matrix has non-finite entries")]
    NonFinite,

    /// No singular value fell below the null-space threshold.
    #[error("empty null space at tolerance {tolerance:.3e}")]
    EmptyNullSpace { tolerance: f64 },

    /// The supplied rotation is not unitary within tolerance.
    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    /// Operands live in different ambient spaces.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// Requested subspace dimensions do not fit the ambient space.
    #[error("bad dimensions: {0}")]
    BadDimensions(String),

    /// The uncertainty counts are inconsistent with the ground-truth partition.
    #[error("uncertainty spec infeasible: {0}")]
    SpecInfeasible(String),

    /// Column selection on a rank-zero projector.
    #[error("projector has rank zero")]
    ZeroProjector,

    /// The requested projector column has (numerically) zero diagonal entry.
    #[error("degenerate projector column {index} (diagonal {diagonal:.3e})")]
    DegenerateColumn { index: usize, diagonal: f64 },

    /// FFT length shorter than the waveform.
    #[error("fft size {n_fft} below waveform length {n}")]
    BadFftSize { n_fft: usize, n: usize },

    /// All polynomial coefficients are below the stripping threshold.
    #[error("degenerate polynomial: all coefficients below threshold")]
    DegeneratePolynomial,

    /// Pairwise geometry does not fit the ambient space.
    #[error("infeasible geometry: {0}")]
    Infeasible(String),

    /// Matched filtering on an undefined waveform-book column.
    #[error("waveform-book column {index} undefined (zero diagonal)")]
    ColumnUndefined { index: usize },

    /// Sample covariance is singular and no diagonal loading was requested.
    #[error("singular sample covariance (loading disabled)")]
    SingularCovariance,

    /// A probability argument outside its open interval.
    #[error("bad probability {0}")]
    BadProbability(f64),

    /// Frame count disagrees with the threshold's block length.
    #[error("block length mismatch: {frames} frames, threshold expects {expected}")]
    BlockLengthMismatch { frames: usize, expected: usize },

    /// An iterative solver failed to reach its stopping criterion.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    /// A zero vector where a direction is required.
    #[error("zero vector")]
    ZeroVector,

    /// Feedback message bytes do not decode.
    #[error("malformed feedback message: {0}")]
    MalformedMessage(String),

    /// Experiment configuration rejected by validation.
    #[error("invalid config: {0}")]
    ConfigInvalid(String),

    /// Filesystem failure while reading config or writing results.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
