use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the numerical core.
///
/// Every variant has a stable category name (see [`Error::category`]) that the
/// CLI prints on failure.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite value at row {row}, column {col}")]
    NonFiniteValue { row: usize, col: usize },
    #[error("empty token at position {index}")]
    EmptyToken { index: usize },
    #[error("token {token:?} contains whitespace")]
    InvalidToken { token: String },
    #[error("duplicate token {token:?}")]
    DuplicateToken { token: String },
    #[error("matrix must have at least one row and one column (got {rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },
    #[error("zero-norm rows at indices {indices:?}")]
    ZeroVectorRow { indices: Vec<usize> },
    #[error("dictionary is empty")]
    EmptyDictionary,
    #[error("no dictionary pair has both tokens in vocabulary ({total} pairs checked)")]
    NoAnchorsRetained { total: usize },
    #[error("SVD did not converge after {sweeps} sweeps (residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("alignment matrix is not orthogonal (max |WᵀW − I| = {defect:e})")]
    NotOrthogonal { defect: f64 },
    #[error("query {query:?} is not in the source vocabulary")]
    QueryOov { query: String },
    #[error("k = {k} exceeds target vocabulary size {max}")]
    KTooLarge { k: usize, max: usize },
    #[error("k must be a positive integer")]
    InvalidK,
    #[error("no evaluation query survived OOV filtering ({skipped} skipped)")]
    EmptyEvaluationSet { skipped: usize },
    #[error("need at least {min} points, got {found}")]
    TooFewPoints { min: usize, found: usize },
    #[error("perplexity {perplexity} exceeds (n-1)/3 = {max}")]
    PerplexityTooLarge { perplexity: f64, max: f64 },
    #[error("perplexity {perplexity} is below the minimum of 2")]
    InvalidPerplexity { perplexity: f64 },
    #[error("duplicate point label {token:?}")]
    DuplicateLabel { token: String },
    #[error("projection produced a non-finite coordinate")]
    NonFiniteOutput,
}

impl Error {
    /// Stable, machine-parsable name of the error category.
    pub fn category(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NonFiniteValue { .. } => "NonFiniteValue",
            Error::EmptyToken { .. } => "EmptyToken",
            Error::InvalidToken { .. } => "InvalidToken",
            Error::DuplicateToken { .. } => "DuplicateToken",
            Error::EmptyMatrix { .. } => "EmptyMatrix",
            Error::ZeroVectorRow { .. } => "ZeroVectorRow",
            Error::EmptyDictionary => "EmptyDictionary",
            Error::NoAnchorsRetained { .. } => "NoAnchorsRetained",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::NotOrthogonal { .. } => "NotOrthogonal",
            Error::QueryOov { .. } => "QueryOov",
            Error::KTooLarge { .. } => "KTooLarge",
            Error::InvalidK => "InvalidK",
            Error::EmptyEvaluationSet { .. } => "EmptyEvaluationSet",
            Error::TooFewPoints { .. } => "TooFewPoints",
            Error::PerplexityTooLarge { .. } => "PerplexityTooLarge",
            Error::InvalidPerplexity { .. } => "InvalidPerplexity",
            Error::DuplicateLabel { .. } => "DuplicateLabel",
            Error::NonFiniteOutput => "NonFiniteOutput",
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
