use pseudospec_core::Error;

/// CLI failure with its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Constraint(String),
    #[error("{0}")]
    Solver(String),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Constraint(_) => 3,
            CliError::Solver(_) => 4,
            CliError::Verification(_) => 5,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidSuperpotential(_)
            | Error::SingularGauge
            | Error::ComplexFrequency
            | Error::NoBoundStates(_)
            | Error::Constraint(_) => CliError::Constraint(msg),
            Error::Domain { .. } | Error::Grid(_) | Error::FamilyMismatch { .. } => CliError::Parse(msg),
            Error::LevelOutOfRange { .. }
            | Error::ExponentOverflow { .. }
            | Error::Dimension { .. }
            | Error::ZeroVector
            | Error::NotSymmetric
            | Error::EigenCount { .. }
            | Error::NoConvergence { .. }
            | Error::Phase(_) => CliError::Solver(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
