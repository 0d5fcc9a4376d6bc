use thiserror::Error;

/// Errors raised by the geometry kernel, the toric dictionary and the
/// invariant layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("points do not affinely span their ambient space")]
    NotFullDimensional,
    #[error("dimension {0} is not supported (must be between 1 and 4)")]
    DimensionCap(usize),
    #[error("the origin is not strictly interior to the polytope")]
    OriginNotInterior,
    #[error("direction vector must be nonzero")]
    ZeroDirection,
    #[error("bounding box holds {count} points, above the cap of {cap}")]
    OverflowGuard { count: u128, cap: u128 },
    #[error("not a Fano polytope: {0}")]
    NotFano(String),
    #[error("vector {0:?} is not primitive")]
    NotPrimitive(Vec<i64>),
    #[error("eps = {eps} must lie in [0, tau) with tau = {tau}")]
    EpsTooLarge { eps: String, tau: String },
    #[error("divisor has no positive coefficient")]
    ZeroDivisor,
    #[error("divisor is not the 1/k-scaled divisor of a section of -kK_X: {0}")]
    DegreeMismatch(String),
    #[error("unknown catalog entry {0:?}")]
    UnknownName(String),
    #[error("no valid instance after {0} attempts")]
    GenerationExhausted(usize),
    #[error("closed form disagrees with oracle: {0}")]
    OracleMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
