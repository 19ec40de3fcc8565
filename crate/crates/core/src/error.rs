use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("state is not positive semi-definite (smallest eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("positivity lost at t = {time}: smallest eigenvalue {min_eigenvalue:e}; reduce dt")]
    PositivityViolation { time: f64, min_eigenvalue: f64 },

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("invalid simplex point: {0}")]
    InvalidSimplexPoint(String),

    #[error("left the simplex at t = {time}: entry {value:e}")]
    SimplexViolation { time: f64, value: f64 },

    #[error("system needs at least one Lindblad term")]
    NoLindbladTerms,

    #[error("Lindblad term is normal; the system is not coolable")]
    NormalTerm,

    #[error("expected exactly one Lindblad term, found {0}")]
    NotRankOne(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown cost function `{0}` (expected purity, entropy or max_eigenvalue)")]
    UnknownCost(String),

    #[error("time grids are misaligned: {0}")]
    MisalignedGrids(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
