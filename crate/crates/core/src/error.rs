use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionError { expected: usize, found: usize },

    #[error("invalid K = {k}: {reason}")]
    InvalidK { k: usize, reason: String },

    #[error("infeasible discard count M = {m} for N = {n}, K = {k}; largest feasible M is {max_feasible}")]
    InvalidM {
        m: usize,
        n: usize,
        k: usize,
        max_feasible: usize,
    },

    #[error(
        "candidates exhausted after selecting {selected} of {k} centroids with M = {m}; \
         largest feasible M is {largest_feasible_m}"
    )]
    ExhaustedCandidates {
        m: usize,
        k: usize,
        selected: usize,
        largest_feasible_m: usize,
    },

    #[error("shape mismatch: {0}")]
    ShapeError(String),

    #[error("reference center {center} has zero coordinate {coordinate}; CCPI is undefined")]
    ZeroReferenceCoordinate { center: usize, coordinate: usize },

    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("{path}: {source}")]
    IoError {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    ParseError {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("missing dataset files: {0}")]
    MissingData(String),

    #[error("{0}")]
    Usage(String),
}

impl Error {
    /// Short variant name, printed by the CLI ahead of the message.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::DimensionError { .. } => "DimensionError",
            Error::InvalidK { .. } => "InvalidK",
            Error::InvalidM { .. } => "InvalidM",
            Error::ExhaustedCandidates { .. } => "ExhaustedCandidates",
            Error::ShapeError(_) => "ShapeError",
            Error::ZeroReferenceCoordinate { .. } => "ZeroReferenceCoordinate",
            Error::NonFinite { .. } => "NonFinite",
            Error::IoError { .. } => "IoError",
            Error::ParseError { .. } => "ParseError",
            Error::MissingData(_) => "MissingData",
            Error::Usage(_) => "Usage",
        }
    }

    /// Process exit code: 1 usage, 2 data, 3 algorithmic.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::IoError { .. }
            | Error::ParseError { .. }
            | Error::NonFinite { .. }
            | Error::DimensionError { .. }
            | Error::ShapeError(_)
            | Error::MissingData(_) => 2,
            Error::DegenerateInput(_)
            | Error::InvalidK { .. }
            | Error::InvalidM { .. }
            | Error::ExhaustedCandidates { .. }
            | Error::ZeroReferenceCoordinate { .. } => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::IoError {
            path: path.into(),
            source,
        }
    }
}
