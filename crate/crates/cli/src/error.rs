use cosmoflux_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("config error: {0}")]
    Config(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("numeric error: {0}")]
    Numeric(CoreError),
    #[error("output error: {0}")]
    Output(String),
}

impl From<CoreError> for AppError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter { .. } | CoreError::DegenerateMode => {
                AppError::Config(e.to_string())
            }
            CoreError::Verification { .. } => AppError::Verification(e.to_string()),
            other => AppError::Numeric(other),
        }
    }
}

impl AppError {
    /// 1 for configuration problems, 2 for failed checks, 3 for numerical
    /// and leakage errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 1,
            AppError::Verification(_) => 2,
            AppError::Numeric(_) | AppError::Output(_) => 3,
        }
    }
}
