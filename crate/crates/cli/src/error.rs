use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid scenario file: {0}")]
    Validation(String),
    #[error("field `{label}`: {message}")]
    Field { label: String, message: String },
    #[error("scenario `{name}`: {message}")]
    Scenario { name: String, message: String },
    #[error("grid: {0}")]
    Grid(String),
}

impl CliError {
    pub fn scenario(name: &str, message: impl ToString) -> Self {
        CliError::Scenario {
            name: name.to_string(),
            message: message.to_string(),
        }
    }
}
