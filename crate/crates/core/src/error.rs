use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{e} exceeds the supported range")]
    FieldTooLarge { p: u64, e: usize },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("invalid field element: {0}")]
    InvalidElement(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{q} is not a positive power of the characteristic {p}")]
    NotCharacteristicPower { q: u64, p: u64 },
    #[error(
        "subfield coordinates are only available over the prime subfield GF({p}), got q = {q}"
    )]
    UnsupportedSubfield { q: u64, p: u64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("points must be sorted by the element order")]
    UnsortedPoints,
    #[error("points must be pairwise distinct")]
    DuplicatePoints,

    #[error("coordinate {index} out of range for length {n}")]
    CoordinateOutOfRange { index: usize, n: usize },
    #[error("empty coordinate set")]
    EmptyCoordinates,
    #[error("distance oracles require k >= 1")]
    ZeroDimension,
    #[error("search guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("bound not applicable: {0}")]
    NotApplicable(String),
    /// Carries a 1-based coordinate.
    #[error("family does not cover coordinate {0}")]
    NotCovering(usize),
    /// Carries a 1-based coordinate.
    #[error("no repair set covers coordinate {0}")]
    LocalityAbsent(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid construction plan: {0}")]
    InvalidPlan(String),
    #[error("independence check failed: {0}")]
    NotIndependent(String),
    #[error("code is not optimal:\n{0}")]
    NotOptimal(crate::construct::OptimalityReport),

    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
