use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use kostant::game::SpecJson;
use serde::de::DeserializeOwned;
use serde_json::json;
use tower_http::services::ServeDir;

use crate::error::ServiceError;
use crate::session::{AutoRequest, FireRequest, SessionStore};

type Store = State<Arc<SessionStore>>;
type ApiResult<T> = Result<Json<T>, ServiceError>;

fn parse<T: DeserializeOwned>(body: &[u8]) -> Result<T, ServiceError> {
    serde_json::from_slice(body).map_err(ServiceError::from_json)
}

async fn create(State(store): Store, body: Bytes) -> Result<impl IntoResponse, ServiceError> {
    let spec: SpecJson = parse(&body)?;
    let created = store.create(&spec)?;
    Ok((StatusCode::CREATED, Json(created)))
}

async fn state(State(store): Store, Path(id): Path<String>) -> ApiResult<impl serde::Serialize> {
    store.state(&id).map(Json)
}

async fn fire(State(store): Store, Path(id): Path<String>, body: Bytes) -> ApiResult<impl serde::Serialize> {
    let req: FireRequest = parse(&body)?;
    store.fire(&id, req.vertex).map(Json)
}

async fn undo(State(store): Store, Path(id): Path<String>) -> ApiResult<impl serde::Serialize> {
    store.undo(&id).map(Json)
}

async fn auto(State(store): Store, Path(id): Path<String>, body: Bytes) -> ApiResult<impl serde::Serialize> {
    let req: AutoRequest = parse(&body)?;
    // Long auto-plays and graph building stay off the async workers.
    tokio::task::spawn_blocking(move || store.auto(&id, &req.strategy, req.steps))
        .await
        .expect("auto-play task panicked")
        .map(Json)
}

async fn artifacts(State(store): Store, Path(id): Path<String>) -> ApiResult<impl serde::Serialize> {
    tokio::task::spawn_blocking(move || store.artifacts(&id))
        .await
        .expect("artifact task panicked")
        .map(Json)
}

async fn catalog() -> Json<serde_json::Value> {
    Json(json!({ "families": SessionStore::catalog() }))
}

async fn not_found() -> ServiceError {
    ServiceError::NotFound("route".into())
}

/// The `/v1` API, with `static_dir` served for every other path when given.
pub fn router(store: Arc<SessionStore>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/v1/sessions", post(create))
        .route("/v1/sessions/{id}", get(state))
        .route("/v1/sessions/{id}/fire", post(fire))
        .route("/v1/sessions/{id}/undo", post(undo))
        .route("/v1/sessions/{id}/auto", post(auto))
        .route("/v1/sessions/{id}/artifacts", get(artifacts))
        .route("/v1/catalog", get(catalog))
        .with_state(store);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.fallback(not_found),
    }
}

#[derive(Debug, Clone)]
pub struct ServeConfig {
    pub addr: SocketAddr,
    pub static_dir: Option<PathBuf>,
    pub idle_timeout: Duration,
    pub log: Option<PathBuf>,
}

/// Runs the service until interrupted. An existing log is replayed first.
pub async fn serve(config: ServeConfig) -> Result<(), ServiceError> {
    let mut store = SessionStore::new(config.idle_timeout);
    if let Some(path) = &config.log {
        if path.exists() {
            store.replay_log(path)?;
        }
        store = store.with_log(path)?;
    }
    let store = Arc::new(store);
    let sweeper = Arc::clone(&store);
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            sweeper.evict_idle();
        }
    });
    let listener = tokio::net::TcpListener::bind(config.addr).await?;
    axum::serve(listener, router(store, config.static_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
