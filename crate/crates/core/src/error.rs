//! Crate-wide error type.

use std::path::PathBuf;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Broad class of a failure, used by callers (e.g. the CLI) to pick an
/// exit code without matching every variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// A parameter or configuration value was unusable as given.
    Config,
    /// The input data violated a contract (malformed, empty, inconsistent).
    Data,
    /// A numeric procedure failed (divergence, singular matrix, ...).
    Numeric,
}

/// Errors produced by corpus ingestion, the numeric kernels, and the
/// model-training routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("no valid records in {path}")]
    ZeroValidRecords { path: PathBuf },

    #[error("alias key {key:?} maps to both {first:?} and {second:?}")]
    AliasConflict {
        key: String,
        first: String,
        second: String,
    },

    #[error("alias target {target:?} (for key {key:?}) is not in the reference list")]
    UnknownAliasTarget { key: String, target: String },

    #[error("unknown region {value:?}")]
    UnknownRegion { value: String },

    #[error("{context}: expected length {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArg(String),

    #[error("{0}")]
    Data(String),

    #[error("cuisine {cuisine:?} has {have} complete flavor vectors, need at least {need}")]
    TooFewFlavorVectors {
        cuisine: String,
        have: usize,
        need: usize,
    },

    #[error("covariance matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("design matrix is rank deficient")]
    RankDeficient,

    #[error("zero variance in {context}")]
    ZeroVariance { context: &'static str },

    #[error("all values tied in {context}")]
    AllTied { context: &'static str },

    #[error("training diverged: {0}")]
    Divergence(String),
}

impl Error {
    /// Classify this error for exit-code mapping.
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidArg(_) => ErrorClass::Config,
            Error::Io { .. }
            | Error::Malformed { .. }
            | Error::ZeroValidRecords { .. }
            | Error::AliasConflict { .. }
            | Error::UnknownAliasTarget { .. }
            | Error::UnknownRegion { .. }
            | Error::Data(_)
            | Error::TooFewFlavorVectors { .. }
            | Error::DimensionMismatch { .. } => ErrorClass::Data,
            Error::NotPositiveDefinite
            | Error::RankDeficient
            | Error::ZeroVariance { .. }
            | Error::AllTied { .. }
            | Error::Divergence(_) => ErrorClass::Numeric,
        }
    }
}
