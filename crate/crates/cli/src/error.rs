use std::path::PathBuf;

use thiserror::Error;

/// Failure of a CLI command, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// help or version text was printed; not a failure
    #[error("help requested")]
    Help,
    #[error("config error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("training diverged: {0}")]
    Divergence(String),
    #[error("gradient check failed: {0}")]
    GradCheck(String),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Help => 0,
            CliError::Config(_) => 2,
            CliError::Data(_) | CliError::Output { .. } => 3,
            CliError::Divergence(_) => 4,
            CliError::GradCheck(_) => 5,
        }
    }
}

impl From<rfunfold::Error> for CliError {
    fn from(e: rfunfold::Error) -> Self {
        use rfunfold::Error as E;
        if e.is_divergence() {
            return CliError::Divergence(e.to_string());
        }
        match e {
            E::InvalidConfig(_) | E::EvenOrder(_) | E::InvalidKind(_) | E::DegenerateSplit(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
