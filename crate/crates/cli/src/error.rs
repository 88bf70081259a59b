use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] nonmark_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// 1 for configuration and input problems, 2 for numerical failures,
    /// 3 for a failed verification.
    pub fn exit_code(&self) -> i32 {
        use nonmark_core::Error as E;
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                E::Contract(_) | E::DimensionMismatch { .. } | E::UnsupportedModel(_) | E::Parse(_) => 1,
                E::Unphysical(_) | E::NoZeros(_) | E::Numerical(_) | E::HorizonTooShort { .. } => 2,
            },
            CliError::Verification(_) => 3,
        }
    }
}
