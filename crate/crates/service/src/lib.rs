//! Stateful sessions over the Kostant game, served as JSON under `/v1`.
//!
//! [`SessionStore`] holds the logic and can be used without HTTP;
//! [`router`] wraps it in an axum router and [`serve`] runs it.

mod api;
mod error;
mod session;

pub use api::{router, serve, ServeConfig};
pub use error::ServiceError;
pub use session::{
    Artifacts, AutoRequest, CatalogEntry, Created, ElementView, FireRequest, SessionId, SessionStore,
    StateView, DEFAULT_IDLE_TIMEOUT, GRAPH_CAP,
};
