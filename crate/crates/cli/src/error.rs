use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unknown keys or an unreadable parameter file.
    #[error("{0}")]
    Usage(String),
    /// The computation itself could not run.
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl From<djt_core::Error> for CliError {
    fn from(e: djt_core::Error) -> Self {
        use djt_core::Error as E;
        match e {
            E::Parse(_) | E::Validation { .. } | E::InvalidArgument(_) => CliError::Usage(e.to_string()),
            E::UnboundedSurface { .. } | E::NoConvergence { .. } | E::InvalidState(_) => {
                CliError::Compute(e.to_string())
            }
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
