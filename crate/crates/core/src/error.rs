use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the toolkit.
///
/// Variants are grouped loosely by the stage that raises them; the pipeline
/// maps them onto process exit codes with [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid schema: {0}")]
    InvalidSchema(String),

    #[error("header does not match schema (missing: [{}], extra: [{}])", missing.join(", "), extra.join(", "))]
    SchemaMismatch {
        missing: Vec<String>,
        extra: Vec<String>,
    },

    #[error("cannot parse {value:?} as a number at row {row}, column {column}")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("value {value:?} in column {column} (row {row}) is not a declared category")]
    UndeclaredCategory {
        row: usize,
        column: String,
        value: String,
    },

    #[error("unknown column {0}")]
    UnknownColumn(String),

    #[error("column {column} is {actual}, expected {expected}")]
    WrongKind {
        column: String,
        expected: &'static str,
        actual: &'static str,
    },

    #[error("missing value in column {column} at row {row}")]
    MissingValue { column: String, row: usize },

    #[error("target value {value} at row {row} is not binary (0 or 1)")]
    NonBinaryTarget { row: usize, value: f64 },

    #[error("column {0} has no present values to fit on")]
    UnfittableColumn(String),

    #[error("column {0} is not covered by the fitted statistics")]
    Coverage(String),

    #[error("unseen category {value:?} in column {column}")]
    UnseenCategory { column: String, value: String },

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("stage {stage} failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 config error, 3 data error, 4 runtime error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Stage { source, .. } => source.exit_code(),
            Error::Config(_) | Error::InvalidParameter(_) | Error::InvalidSchema(_) => 2,
            Error::Io { .. }
            | Error::Csv(_)
            | Error::SchemaMismatch { .. }
            | Error::Parse { .. }
            | Error::UndeclaredCategory { .. }
            | Error::UnknownColumn(_)
            | Error::WrongKind { .. }
            | Error::MissingValue { .. }
            | Error::NonBinaryTarget { .. }
            | Error::UnfittableColumn(_)
            | Error::UnseenCategory { .. }
            | Error::Empty(_) => 3,
            _ => 4,
        }
    }
}
