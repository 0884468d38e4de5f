use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty point set")]
    EmptyInput,
    #[error("points do not span a full-dimensional polytope (affine rank {rank} in dimension {dim})")]
    DegenerateSpan { rank: usize, dim: usize },
    #[error("points have inconsistent dimensions ({expected} vs {found})")]
    DimensionInconsistent { expected: usize, found: usize },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("direction is not generic: polar vertices of facets {0} and {1} tie")]
    NonGenericDirection(usize, usize),
    #[error("invalid facet selection: {0}")]
    InvalidSelection(String),
    #[error("no disk selection found")]
    NoDiskSelection,
    #[error("Ehrhart interpolation disagrees with direct count at k = {k}: {expected} vs {found}")]
    InterpolationMismatch { k: i64, expected: String, found: String },
    #[error("generators found below degree floor {floor}")]
    FloorTooHigh { floor: i64 },
    #[error("dimension mismatch at {term}: {detail}")]
    DimensionMismatch { term: String, detail: String },
    #[error("degree pattern violation at ({row}, {col}): {detail}")]
    DegreePatternViolation { row: usize, col: usize, detail: String },
    #[error("cohomology enumeration did not stabilize within box radius {radius}")]
    NotStabilized { radius: i64 },
    #[error("support has {0} lattice points; the exterior algebra engine supports at most 64")]
    TooManyGenerators(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, Error>;
