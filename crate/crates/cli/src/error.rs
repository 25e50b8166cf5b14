use qfsieve_core::Error as CoreError;
use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Physics(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Physics(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::NotSpd
            | CoreError::NonPositiveDeterminant { .. }
            | CoreError::UnphysicalState { .. }
            | CoreError::SingularSigma
            | CoreError::SingularDiffusion { .. } => CliError::Physics(msg),
            CoreError::NotStable
            | CoreError::SingularSystem
            | CoreError::LostPositivity { .. }
            | CoreError::IntegrationFailure { .. } => CliError::Numerical(msg),
            CoreError::InvalidStep(_)
            | CoreError::InvalidArgument(_)
            | CoreError::Bracket { .. }
            | CoreError::BoxTooSmall(_)
            | CoreError::IndexOutOfRange { .. } => CliError::Usage(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o error: {e}"))
    }
}
