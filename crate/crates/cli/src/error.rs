use thiserror::Error;

/// Exit code for malformed input (`EX_DATAERR`-style usage error).
pub const EXIT_INPUT: i32 = 64;
/// Exit code for internal numerical failures.
pub const EXIT_SOFTWARE: i32 = 70;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Numerical(ndefect::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Io(_) | CliError::Numerical(_) | CliError::Failed(_) => EXIT_SOFTWARE,
        }
    }
}

impl From<ndefect::Error> for CliError {
    fn from(e: ndefect::Error) -> Self {
        use ndefect::Error as E;
        match e {
            E::NoConvergence(_) | E::FactorizationMismatch(_) | E::SolutionInvalid(_) | E::GuardFailed(_) => {
                CliError::Numerical(e)
            }
            other => CliError::Input(other.to_string()),
        }
    }
}
