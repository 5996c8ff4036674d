use std::io;

use lexalign_core::PreprocessMode;

/// Errors from file formats, IO and the command-line pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] lexalign_core::Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
    #[error("line 1: header must be two positive integers \"n d\", got {found:?}")]
    MalformedHeader { found: String },
    #[error("line {line}: expected {expected} values, found {found}")]
    DimensionMismatch { line: usize, expected: usize, found: usize },
    #[error("line {line}: cannot parse {value:?} as a number")]
    NonNumericValue { line: usize, value: String },
    #[error("line {line}: non-finite value {value:?}")]
    NonFiniteValue { line: usize, value: String },
    #[error("line {line}: empty token")]
    EmptyToken { line: usize },
    #[error("line {line}: token {token:?} contains whitespace")]
    InvalidToken { line: usize, token: String },
    #[error("header declares {declared} rows but no data rows were found")]
    TruncatedFile { declared: usize },
    #[error("line {line}: invalid UTF-8")]
    InvalidUtf8 { line: usize },
    #[error("line {line}: expected exactly two fields")]
    MalformedLine { line: usize },
    #[error("malformed alignment map: {0}")]
    MalformedMap(String),
    #[error("malformed report: {0}")]
    MalformedReport(String),
    #[error("preprocess mode {requested} does not match mode {recorded} recorded in the alignment map")]
    ModeMismatch { requested: PreprocessMode, recorded: PreprocessMode },
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub fn io(context: impl Into<String>, source: io::Error) -> Self {
        Error::Io { context: context.into(), source }
    }

    /// Stable category name printed by the CLI on failure.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Core(e) => e.category(),
            Error::Io { .. } => "IoFailure",
            Error::MalformedHeader { .. } => "MalformedHeader",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NonNumericValue { .. } => "NonNumericValue",
            Error::NonFiniteValue { .. } => "NonFiniteValue",
            Error::EmptyToken { .. } => "EmptyToken",
            Error::InvalidToken { .. } => "InvalidToken",
            Error::TruncatedFile { .. } => "TruncatedFile",
            Error::InvalidUtf8 { .. } => "InvalidUtf8",
            Error::MalformedLine { .. } => "MalformedLine",
            Error::MalformedMap(_) => "MalformedMap",
            Error::MalformedReport(_) => "MalformedReport",
            Error::ModeMismatch { .. } => "ModeMismatch",
            Error::Usage(_) => "UsageError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
