use thiserror::Error;

/// Errors produced by the geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid coordinate plane ({k}, {j}) in dimension {dim}: need 1 <= k < j <= {dim}")]
    InvalidPlane { k: usize, j: usize, dim: usize },

    #[error("invalid index subset for trivial extension: {0}")]
    InvalidIndexSubset(String),

    #[error("matrix is not orthogonal: max |M^T M - I| = {deviation:.3e}")]
    NotOrthogonal { deviation: f64 },

    #[error("matrix has determinant -1 (a reflection, not a rotation): det = {det}")]
    DeterminantMinusOne { det: f64 },

    #[error("matrix determinant {det} is not 1")]
    BadDeterminant { det: f64 },

    #[error("unsupported dimension {0}: only 2, 3 and 4 are supported")]
    UnsupportedDimension(usize),

    #[error("at least {needed} samples are required, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("vector norms differ: |v| = {left}, |w| = {right}")]
    NormMismatch { left: f64, right: f64 },

    #[error("zero vector")]
    ZeroVector,

    #[error("decomposition factor deviates from block form by {deviation:.3e}")]
    BlockFormViolation { deviation: f64 },

    #[error("rotation does not fix the last basis vector (deviation {deviation:.3e})")]
    NotBlockForm { deviation: f64 },

    #[error("point is the projection pole")]
    PoleProjection,

    #[error("point is not on the unit sphere: |p| = {norm}")]
    NotOnSphere { norm: f64 },

    #[error("hyperplane meets the sphere in a degenerate set (radius^2 = {radius_sq:.3e})")]
    DegenerateIntersection { radius_sq: f64 },

    #[error("great circle has no cone point")]
    GreatCircle,

    #[error("plane does not meet the unit sphere in a circle (|offset| = {offset})")]
    NoIntersection { offset: f64 },

    #[error("zero tangent vector")]
    ZeroTangent,

    #[error("point coincides with the inversion center")]
    CenterInversion,

    #[error("zero normal vector")]
    ZeroNormal,

    #[error("nonpositive radius {0}")]
    BadRadius(f64),

    #[error("inverse image is not a great sphere (normalised offset {offset:.3e})")]
    NotGreatSphere { offset: f64 },

    #[error("point lies {distance:.3e} away from the line")]
    PointOffLine { distance: f64 },

    #[error("the two points coincide")]
    CoincidentPoints,

    #[error("center at distance {distance} from the midpoint lies in the segment (half-length {rho0})")]
    CenterInForbiddenSegment { distance: f64, rho0: f64 },

    #[error("point lies on the symmetry axis")]
    OnAxis,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Stable variant name, used in diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidPlane { .. } => "InvalidPlane",
            Error::InvalidIndexSubset(_) => "InvalidIndexSubset",
            Error::NotOrthogonal { .. } => "NotOrthogonal",
            Error::DeterminantMinusOne { .. } => "DeterminantMinusOne",
            Error::BadDeterminant { .. } => "BadDeterminant",
            Error::UnsupportedDimension(_) => "UnsupportedDimension",
            Error::TooFewSamples { .. } => "TooFewSamples",
            Error::NormMismatch { .. } => "NormMismatch",
            Error::ZeroVector => "ZeroVector",
            Error::BlockFormViolation { .. } => "BlockFormViolation",
            Error::NotBlockForm { .. } => "NotBlockForm",
            Error::PoleProjection => "PoleProjection",
            Error::NotOnSphere { .. } => "NotOnSphere",
            Error::DegenerateIntersection { .. } => "DegenerateIntersection",
            Error::GreatCircle => "GreatCircle",
            Error::NoIntersection { .. } => "NoIntersection",
            Error::ZeroTangent => "ZeroTangent",
            Error::CenterInversion => "CenterInversion",
            Error::ZeroNormal => "ZeroNormal",
            Error::BadRadius(_) => "BadRadius",
            Error::NotGreatSphere { .. } => "NotGreatSphere",
            Error::PointOffLine { .. } => "PointOffLine",
            Error::CoincidentPoints => "CoincidentPoints",
            Error::CenterInForbiddenSegment { .. } => "CenterInForbiddenSegment",
            Error::OnAxis => "OnAxis",
            Error::InvalidConfig(_) => "InvalidConfig",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
