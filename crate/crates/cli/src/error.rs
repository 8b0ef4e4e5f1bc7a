use thiserror::Error;

use crate::formats::FormatError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Format(#[from] FormatError),

    #[error("{0}")]
    Engine(#[from] patmark_core::Error),

    #[error("{0}")]
    Validation(String),

    /// Command-line misuse (missing or inconsistent flags); exits 64.
    #[error("{0}")]
    Usage(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// Stable machine-readable tag for the json error payload.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Format(_) => "parse",
            CliError::Engine(patmark_core::Error::BoundaryDependent { .. }) => {
                "boundary-dependent"
            }
            CliError::Engine(
                patmark_core::Error::ScenarioCapExceeded { .. }
                | patmark_core::Error::OracleCapExceeded { .. }
                | patmark_core::Error::OracleOverflow,
            ) => "cap-exceeded",
            CliError::Engine(_) => "validation",
            CliError::Validation(_) => "validation",
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
        }
    }
}

pub fn io_err(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Io { context, source }
}
