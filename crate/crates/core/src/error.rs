use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("chart dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("coordinate index {index} out of range 1..={max}")]
    CoordinateOutOfRange { index: usize, max: usize },

    #[error("fiber rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("form degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: i32, right: i32 },

    #[error("form of degree {degree} is not primitive")]
    NotPrimitive { degree: i32 },

    #[error("cannot compose fiber kinds {left} and {right}")]
    IncomposableFibers { left: String, right: String },

    #[error("elements live in different positions of the complex: {0}")]
    PositionMismatch(String),

    #[error("gauge transformation check failed: g * g^-1 != I")]
    GaugeInverse,

    #[error("matrix is singular")]
    Singular,

    #[error("curvature has a nonzero primitive part")]
    PrimitiveCurvature,

    #[error("connection is not symplectically flat")]
    NotFlat,

    #[error("branch table and A-infinity series disagree for twisted m1 on {0}")]
    BranchMismatch(String),

    #[error("target truncation {given} is below the required {required}")]
    InsufficientTruncation { given: u32, required: u32 },

    #[error("cone element of grading {grading} does not have the expected Lefschetz shape")]
    ConeShape { grading: i32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
