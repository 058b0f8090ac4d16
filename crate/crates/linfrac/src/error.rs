//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by construction, analysis and iteration routines.
#[derive(Debug, Error)]
pub enum Error {
    /// The system matrix is numerically singular (smallest singular value
    /// below the relative threshold).
    #[error(
        "singular system matrix: sigma_min/sigma_max = {ratio:.3e} (threshold {threshold:.3e})"
    )]
    SingularMatrix { ratio: f64, threshold: f64 },

    /// The matrix (or block data) does not have the expected shape.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Projection of a homogeneous vector whose last component vanishes.
    #[error("projection undefined: last component {pr:.3e} below tolerance {threshold:.3e}")]
    ForbiddenProjection { pr: f64, threshold: f64 },

    /// The point lies on the principal forbidden hyperplane.
    #[error("point lies on the principal forbidden hyperplane (denominator {denominator:.3e})")]
    ForbiddenPoint { denominator: f64 },

    /// An eigen/singular value decomposition did not converge.
    #[error("decomposition did not converge: {0}")]
    ConvergenceFailure(&'static str),

    /// The eigenvector basis is too ill conditioned to trust downstream results.
    #[error("eigenbasis condition number {cond:.3e} exceeds cap {cap:.3e}")]
    IllConditionedEigenbasis { cond: f64, cap: f64 },

    /// Operation requires a semisimple (diagonalizable) matrix.
    #[error("matrix is not semisimple: {0}")]
    NotSemisimple(String),

    /// The spectrum is not closed under the eigenvalue pairing for this epsilon.
    #[error("spectrum is not closed under lambda -> {epsilon}/lambda")]
    NotEpsilonSimilar { epsilon: f64 },

    /// An eigenvalue near the unit circle could not be assigned a pairing partner.
    #[error("eigenvalue pairing ambiguous near {re:.6e}{im:+.6e}i")]
    PairingAmbiguity { re: f64, im: f64 },

    /// The solution space is empty.
    #[error("solution space is empty")]
    EmptySpace,

    /// Fewer than two nonzero quadratic coefficients: the quadric construction
    /// does not apply and the affine-variety fallback is taken.
    #[error("insufficient support: {nonzero} nonzero quadratic coefficient(s)")]
    InsufficientSupport { nonzero: usize },

    /// No invertible real combination was found within the search budget.
    #[error("no invertible combination found within budget {budget}")]
    NoInvertibleCombination { budget: usize },

    /// The operation's mathematical preconditions do not hold for this input.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// An instance specification is inconsistent.
    #[error("invalid instance spec: {0}")]
    InvalidSpec(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
