//! JSON over HTTP.
//!
//! | method | path | body |
//! |--------|------|------|
//! | POST | `/sites` | site document (XML or JSON) |
//! | GET  | `/sites` | |
//! | GET  | `/sites/{id}/count?multi_token=true` | |
//! | POST | `/sessions` | `{"site_id": ...}` |
//! | GET  | `/sessions/{token}` | |
//! | POST | `/sessions/{token}/input` | `{"utterance": ["d", "s"]}` |
//! | GET  | `/sessions/{token}/reflect` | |
//! | POST | `/sessions/{token}/back` | `{"n": 1}` |
//! | GET  | `/health` | |
//!
//! Failures are `{"error": code, "message": text}` with a 4xx status.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::json;
use staging_core::Utterance;

use crate::{InteractionManager, ManagerError};

pub fn router(manager: Arc<InteractionManager>) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/sites", get(list_sites).post(ingest))
        .route("/sites/{id}/count", get(count))
        .route("/sessions", post(create_session))
        .route("/sessions/{token}", get(current))
        .route("/sessions/{token}/input", post(input))
        .route("/sessions/{token}/reflect", get(reflect))
        .route("/sessions/{token}/back", post(back))
        .fallback(|| async { ApiError(ManagerError::BadRequest("no such route".into()), StatusCode::NOT_FOUND) })
        .with_state(manager)
}

/// Serve until the listener fails.
pub async fn serve(listener: tokio::net::TcpListener, manager: Arc<InteractionManager>) -> std::io::Result<()> {
    axum::serve(listener, router(manager)).await
}

struct ApiError(ManagerError, StatusCode);

impl From<ManagerError> for ApiError {
    fn from(e: ManagerError) -> Self {
        let status = match e {
            ManagerError::UnknownSite(_) | ManagerError::UnknownSession(_) => StatusCode::NOT_FOUND,
            ManagerError::SessionExpired(_) => StatusCode::GONE,
            ManagerError::InvalidSite(_) | ManagerError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ManagerError::BackTooFar { .. } => StatusCode::CONFLICT,
        };
        ApiError(e, status)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({"error": self.0.code(), "message": self.0.to_string()});
        (self.1, Json(body)).into_response()
    }
}

type ApiResult = Result<Response, ApiError>;

fn parse<T: DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ManagerError::BadRequest(e.to_string()).into())
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({"status": "ok"}))
}

async fn list_sites(State(m): State<Arc<InteractionManager>>) -> Json<serde_json::Value> {
    Json(json!({"sites": m.sites()}))
}

async fn ingest(State(m): State<Arc<InteractionManager>>, body: Bytes) -> ApiResult {
    let text = std::str::from_utf8(&body)
        .map_err(|_| ManagerError::BadRequest("site document must be UTF-8".into()))?;
    let summary = m.ingest_site(text)?;
    Ok((StatusCode::CREATED, Json(summary)).into_response())
}

#[derive(Deserialize)]
struct CountQuery {
    #[serde(default)]
    multi_token: bool,
}

async fn count(
    State(m): State<Arc<InteractionManager>>,
    Path(id): Path<String>,
    Query(q): Query<CountQuery>,
) -> ApiResult {
    Ok(Json(m.count(&id, q.multi_token)?).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NewSession {
    site_id: String,
}

async fn create_session(State(m): State<Arc<InteractionManager>>, body: Bytes) -> ApiResult {
    let req: NewSession = parse(&body)?;
    Ok((StatusCode::CREATED, Json(m.create_session(&req.site_id)?)).into_response())
}

async fn current(State(m): State<Arc<InteractionManager>>, Path(token): Path<String>) -> ApiResult {
    Ok(Json(m.current(&token)?).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Input {
    utterance: Utterance,
}

async fn input(
    State(m): State<Arc<InteractionManager>>,
    Path(token): Path<String>,
    body: Bytes,
) -> ApiResult {
    let req: Input = parse(&body)?;
    Ok(Json(m.submit_input(&token, &req.utterance)?).into_response())
}

async fn reflect(State(m): State<Arc<InteractionManager>>, Path(token): Path<String>) -> ApiResult {
    let tokens = m.reflect(&token)?;
    Ok(Json(json!({"valid_tokens": tokens})).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Back {
    #[serde(default = "one")]
    n: usize,
}

fn one() -> usize {
    1
}

async fn back(
    State(m): State<Arc<InteractionManager>>,
    Path(token): Path<String>,
    body: Bytes,
) -> ApiResult {
    let req: Back = if body.iter().all(u8::is_ascii_whitespace) {
        Back { n: 1 }
    } else {
        parse(&body)?
    };
    Ok(Json(m.step_back(&token, req.n)?).into_response())
}
