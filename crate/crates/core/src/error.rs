use thiserror::Error;

/// Errors raised by mesh construction, refinement and the analysis routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid index domain: {0}")]
    InvalidDomain(String),
    #[error("invalid breakpoints: {0}")]
    InvalidBreakpoints(String),
    #[error("entity is not a cell of the mesh")]
    NotACell,
    #[error("cell is not contained in the active region")]
    CellOutsideActiveRegion,
    #[error("bisection midpoint of ({lo},{hi}) is not an integer")]
    NonIntegerMidpoint { lo: i64, hi: i64 },
    #[error("direction {0} out of range")]
    InvalidDirection(usize),
    #[error("point does not lie in the interior of a cell")]
    PointNotInCell,
    #[error("point lies outside the index domain")]
    PointOutsideDomain,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation requires dimension at least {required}, mesh has {got}")]
    DimensionTooSmall { required: usize, got: usize },
    #[error("T-junction classification failed: {0}")]
    ClassificationAmbiguous(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no separating T-junction found")]
    NotFound,
    #[error("not enough knots in direction {direction} to build a local knot vector")]
    InsufficientKnots { direction: usize },
    #[error("cell bounds are not adjacent entries of the global knot vector in direction {direction}")]
    NonAdjacentCellBounds { direction: usize },
    #[error("knot vector has zero parametric length")]
    DegenerateKnots,
    #[error("both anchors are the same entity")]
    SameAnchor,
    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
