use thiserror::Error;

/// Failure classes shared by every module; the CLI maps them onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GpError {
    #[error("input error: {0}")]
    Input(String),
    #[error("capability exceeded: {0}")]
    Capability(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("quotient is not full: ({0}, {1}) disagrees with the image pair")]
    NotFull(String, String),
}

pub type Result<T> = std::result::Result<T, GpError>;

impl GpError {
    pub fn exit_code(&self) -> i32 {
        match self {
            GpError::Capability(_) => 3,
            _ => 2,
        }
    }
}

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(GpError::Input(msg.into()))
}

pub(crate) fn capability<T>(msg: impl Into<String>) -> Result<T> {
    Err(GpError::Capability(msg.into()))
}

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(GpError::Contract(msg.into()))
}
