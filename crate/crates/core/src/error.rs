use std::path::PathBuf;

use thiserror::Error;

use crate::distance::DistanceMetric;
use crate::neighbors::SearchBackend;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed CSV in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("missing header row")]
    MissingHeader,
    #[error("duplicate column {0:?} in header")]
    DuplicateColumn(String),
    #[error("column {0:?} not found in header")]
    MissingColumn(String),
    #[error("no data rows")]
    EmptyData,
    #[error("row {row}, column {column:?}: cannot parse {value:?} as a finite number")]
    ParseCell {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row}, column {column:?}: missing value")]
    MissingValue { row: usize, column: String },
    #[error("target column {0:?} cannot be categorical")]
    TargetIsCategorical(String),
    #[error("column {column:?}: {reason}")]
    InvalidColumn { column: String, reason: String },
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("train_fraction must lie strictly between 0 and 1, got {0}")]
    InvalidFraction(f64),
    #[error("splitting {rows} rows with train_fraction {fraction} leaves an empty side")]
    EmptySplit { rows: usize, fraction: f64 },

    #[error("vector lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty input vector")]
    EmptyInput,
    #[error("non-finite value in input vector")]
    NonFinite,
    #[error("hamming distance needs categorical codes, found {0}")]
    NotACode(f64),
    #[error("hamming distance needs all-categorical features, column {0:?} is numeric")]
    HammingOnNumeric(String),
    #[error("{backend} backend does not support the {metric} metric")]
    IncompatibleBackend {
        metric: DistanceMetric,
        backend: SearchBackend,
    },
    #[error("query has {got} features, index has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("k must lie in 1..={n}, got {k}")]
    KOutOfRange { k: usize, n: usize },
    #[error("k must be at least 1")]
    ZeroK,

    #[error("k-th neighbor radius is zero, density is unbounded")]
    ZeroRadius,
    #[error("density estimation needs the euclidean metric, model uses {0}")]
    DensityNeedsEuclidean(DistanceMetric),

    #[error("R-squared is undefined: truth vector is constant (SST = 0)")]
    UndefinedRSquared,

    #[error("invalid k range {k_min}..={k_max} for {n_train} training rows (need 1 <= k_min <= k_max <= training rows)")]
    InvalidKRange {
        k_min: usize,
        k_max: usize,
        n_train: usize,
    },
    #[error("no sweep row has a defined R-squared")]
    NoDefinedRSquared,
    #[error("chart needs at least 2 defined points, got {0}")]
    TooFewPoints(usize),
    #[error("invalid thread count: {0}")]
    InvalidThreads(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
