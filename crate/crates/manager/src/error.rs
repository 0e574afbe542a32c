use staging_core::site::SiteError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManagerError {
    #[error("invalid site document: {0}")]
    InvalidSite(#[from] SiteError),
    #[error("no site with id `{0}`")]
    UnknownSite(String),
    #[error("no live session `{0}`")]
    UnknownSession(String),
    #[error("session `{0}` expired")]
    SessionExpired(String),
    #[error("cannot step back {requested} turns, only {available} recorded")]
    BackTooFar { requested: usize, available: usize },
    #[error("{0}")]
    BadRequest(String),
}

impl ManagerError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            ManagerError::InvalidSite(_) => "invalid_site",
            ManagerError::UnknownSite(_) => "unknown_site",
            ManagerError::UnknownSession(_) => "unknown_session",
            ManagerError::SessionExpired(_) => "session_expired",
            ManagerError::BackTooFar { .. } => "back_too_far",
            ManagerError::BadRequest(_) => "bad_request",
        }
    }
}
