use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate column {}: zero empirical variance", column_label(*.column, .name))]
    DegenerateColumn { column: usize, name: Option<String> },

    #[error("sortability undefined: the graph has no directed paths")]
    UndefinedSortability,

    #[error("path count overflow between nodes {source_node} and {target_node}")]
    PathCountOverflow { source_node: usize, target_node: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn column_label(column: usize, name: &Option<String>) -> String {
    match name {
        Some(n) => format!("{column} ({n})"),
        None => column.to_string(),
    }
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Stable machine-readable identifier, used on the CLI's stderr and by the C ABI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::DegenerateColumn { .. } => "degenerate_column",
            Error::UndefinedSortability => "undefined_sortability",
            Error::PathCountOverflow { .. } => "path_count_overflow",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Parse { .. } => "parse_error",
            Error::Io(_) => "io_error",
            Error::Json(_) => "json_error",
        }
    }
}
