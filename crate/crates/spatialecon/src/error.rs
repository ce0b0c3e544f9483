//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(String, String),

    #[error("invalid k = {k} for n = {n} units (require 1 <= k < n)")]
    InvalidK { k: usize, n: usize },

    #[error("coincident points {0} and {1} (zero distance within cutoff)")]
    ZeroDistance(String, String),

    #[error("weights matrix has no nonzero entries")]
    NoConnectivity,

    #[error("shape mismatch: {0}")]
    ShapeError(String),

    #[error("unknown unit identifier '{0}'")]
    UnknownId(String),

    #[error("normalization: {0}")]
    Normalization(String),

    #[error("variable has zero variance")]
    ZeroVariance,

    #[error("wrong model kind: expected {expected}, got {got}")]
    WrongModel { expected: String, got: String },

    #[error("design matrix is rank deficient")]
    SingularDesign,

    #[error("spatial models require a normalized weights matrix (row or eigen)")]
    RequiresNormalizedW,

    #[error("I - rho*W is singular at rho = {0}")]
    SingularMultiplier(f64),

    #[error("n = {n} exceeds the dense materialization cap ({cap})")]
    TooLargeForDense { n: usize, cap: usize },

    #[error("covariate index {index} out of range (k = {k})")]
    BadIndex { index: usize, k: usize },

    #[error("covariance matrix is not positive semi-definite")]
    BadCovariance,

    #[error("models are not nested: {0} vs {1}")]
    NotNested(String, String),

    #[error("missing values in rows {0:?}; drop or impute before weights construction")]
    MissingData(Vec<usize>),

    #[error("id mismatch between data and weights: {0}")]
    IdMismatch(String),

    #[error("configuration: {0}")]
    ConfigError(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: config errors, I/O errors, and
    /// computation errors are distinguishable by code.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConfigError(_) => 2,
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => 3,
            _ => 4,
        }
    }
}
