//! Error type shared across the library.

/// Everything that can go wrong while building problems or running a
/// recovery. Algorithm-level outcomes that are expected in normal use
/// (iteration caps, entropy gates, exhausted atoms) are *not* errors;
/// they are reported through `recovery::Termination`.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A vector with zero l2 norm where a direction is required.
    #[error("vector has zero l2 norm")]
    ZeroVector,

    /// Dictionary column with zero norm; it cannot be unit-normalized.
    #[error("column {0} has zero l2 norm and cannot be normalized")]
    ZeroColumn(usize),

    /// Operand shapes do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The selected columns are (numerically) linearly dependent, so the
    /// least-squares system has no unique solution.
    #[error("selected columns are rank deficient")]
    RankDeficient,

    /// NaN or infinity where finite data is required.
    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    /// A size parameter outside the supported range.
    #[error("bad dimension: {0}")]
    BadDimension(String),

    /// A scalar parameter outside the supported range.
    #[error("bad parameter: {0}")]
    BadParameter(String),

    /// Entropy weights must be non-negative.
    #[error("entropy weights must be non-negative")]
    NegativeWeight,

    /// The previous conditional entropy is already (numerically) zero, so
    /// the entropy ratio of consecutive iterations is undefined.
    #[error("previous conditional entropy is numerically zero")]
    DegenerateHistory,

    /// The default gate formula produced a non-positive threshold; the
    /// caller has to supply an explicit gate value instead.
    #[error("gate threshold is non-positive; supply an explicit gamma")]
    NonPositiveGamma,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short stable identifier, used by the benchmark reports when a run
    /// fails and the error has to be recorded in a termination column.
    pub fn label(&self) -> &'static str {
        match self {
            Error::ZeroVector => "ZeroVector",
            Error::ZeroColumn(_) => "ZeroColumn",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::RankDeficient => "RankDeficient",
            Error::NonFinite(_) => "NonFinite",
            Error::BadDimension(_) => "BadDimension",
            Error::BadParameter(_) => "BadParameter",
            Error::NegativeWeight => "NegativeWeight",
            Error::DegenerateHistory => "DegenerateHistory",
            Error::NonPositiveGamma => "NonPositiveGamma",
        }
    }
}
