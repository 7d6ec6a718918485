use thiserror::Error;

/// Errors raised by the computational core.
///
/// Report-style checks (groupoid validation, bundle validation, Morita
/// validation) do not use this type; they return lists of violations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("integer overflow during exact arithmetic")]
    Overflow,

    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("cover does not cover the complex: {0}")]
    NotACover(String),

    #[error("invalid simplicial complex: {0}")]
    InvalidComplex(String),

    #[error("degree {degree} is outside the materialized range (max {max})")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("bidegree ({p},{k}) is not materialized")]
    BidegreeOutOfRange { p: usize, k: usize },

    #[error("face index {index} out of range for level {p}")]
    FaceOutOfRange { index: usize, p: usize },

    #[error("cell cap exceeded: {cells} cells > cap {cap}")]
    SizeGuard { cells: usize, cap: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("cochain is not closed")]
    NotClosed,

    #[error("chain is not a cycle")]
    NotACycle,

    #[error("class is not integral")]
    NotIntegral,

    #[error("the 3-form component is not exact on the object space")]
    OmegaNotExact,

    #[error("no realization on this model; refine the cover (Morita refinement)")]
    NeedsRefinement,

    #[error("invalid bundle cocycle: {0}")]
    InvalidBundle(String),

    #[error("invalid extension cocycle: {0}")]
    InvalidExtension(String),

    #[error("pseudo-curvatures differ")]
    CurvatureMismatch,

    #[error("not a section of the projection")]
    NotASection,

    #[error("value outside the fiber group (1/{0})Z/Z")]
    OutsideFiber(u64),

    #[error("complex is not a closed oriented pseudomanifold: {0}")]
    NotAPseudomanifold(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("assignment is not a refinement: {0}")]
    NotARefinement(String),

    #[error("cochain is not flat")]
    NotFlat,

    #[error("base groupoids differ")]
    BaseMismatch,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
