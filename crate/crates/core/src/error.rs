use thiserror::Error;

/// Errors raised by network generation, group construction and estimation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),

    /// A node id in an edge list does not refer to a row of the node table.
    #[error("referential integrity: {0}")]
    Referential(String),

    #[error("calibration failed: {0}")]
    Calibration(String),

    /// A comparison group has an empty treatment arm.
    #[error("degenerate comparison group for unit {owner}: {reason}")]
    DegenerateGroup { owner: usize, reason: String },

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("design matrix is rank deficient: {0}")]
    Collinearity(String),

    #[error("degenerate test: {0}")]
    DegenerateTest(String),

    #[error("link function is not integrable: {0}")]
    NotIntegrable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// Short machine-readable tag, used by the CLI diagnostics line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Input(_) => "input",
            Error::Io { .. } => "io",
            Error::Parse(_) => "parse",
            Error::Referential(_) => "referential",
            Error::Calibration(_) => "calibration",
            Error::DegenerateGroup { .. } => "degenerate_group",
            Error::Estimation(_) => "estimation",
            Error::Collinearity(_) => "collinearity",
            Error::DegenerateTest(_) => "degenerate_test",
            Error::NotIntegrable(_) => "not_integrable",
        }
    }
}
