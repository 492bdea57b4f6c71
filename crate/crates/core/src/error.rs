use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no connected graph sampled after {attempts} attempts")]
    GenerationFailed { attempts: usize },

    #[error("integration diverged at t = {t}")]
    IntegrationDiverged { t: f64 },

    #[error("{what} has size {size}, above the limit of {limit}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("{what} did not converge within {iterations} iterations")]
    NotConverged {
        what: &'static str,
        iterations: usize,
    },

    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("trajectory csv line {line}: {message}")]
    Csv { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}
