use std::process::ExitCode;

/// Errors surfaced by the command-line driver, each mapped to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver did not converge: {0}")]
    Convergence(String),
    #[error("{failed} of {total} sweep points failed")]
    PartialSweep { failed: usize, total: usize },
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            Self::Config(_) => 2,
            Self::Convergence(_) => 3,
            Self::PartialSweep { .. } => 4,
            Self::Other(_) => 1,
        })
    }
}

impl From<gpegap_core::Error> for CliError {
    fn from(e: gpegap_core::Error) -> Self {
        use gpegap_core::Error as E;
        match e {
            E::InvalidDomain(_)
            | E::GridTooCoarse { .. }
            | E::InvalidConfig(_)
            | E::Unsorted
            | E::DegeneracyMismatch(_)
            | E::Unavailable(_) => Self::Config(e.to_string()),
            E::NotConverged { .. } | E::LinearSolve { .. } => Self::Convergence(e.to_string()),
            other => Self::Other(other.into()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Other(e.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;
