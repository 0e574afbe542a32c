//! Live sessions over staged site dialogs.
//!
//! [`InteractionManager`] owns ingested sites, sessions and the
//! specialization cache; [`http::router`] exposes it as a JSON service.

mod cache;
mod error;
pub mod http;
mod manager;
mod session;

pub use cache::{CacheHit, CacheKey, CachedState, SiteCache};
pub use error::ManagerError;
pub use manager::{
    InteractionManager, InteractionResponse, ManagerConfig, OptionLink, SiteRecord, SiteSummary,
};
pub use session::{Session, SessionToken, Snapshot};
