use std::path::PathBuf;

/// Failures mapped onto process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("validation failed: {0}")]
    Validation(#[from] qwpath_core::Error),

    #[error("usage: {0}")]
    Usage(String),

    #[error("numerical check failed: {0}")]
    Numeric(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 validation, 2 numeric check, 3 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(e) if is_numeric(e) => 2,
            CliError::Config(_) | CliError::Validation(_) | CliError::Usage(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

fn is_numeric(e: &qwpath_core::Error) -> bool {
    use qwpath_core::Error::*;
    matches!(
        e,
        NoConvergence { .. }
            | DegenerateWalkSpectrum { .. }
            | SingularDenominator { .. }
            | NegativeProbability { .. }
            | NotProbability { .. }
    )
}
