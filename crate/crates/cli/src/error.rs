use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config line {line}, key `{key}`: {message}")]
    Config {
        line: usize,
        key: String,
        message: String,
    },
    #[error("{0}")]
    Domain(#[from] spdc_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::Io(_) => 2,
            CliError::Domain(spdc_core::Error::LowStatistics { .. }) => 4,
            CliError::Domain(_) => 3,
        }
    }
}
