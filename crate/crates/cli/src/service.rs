//! HTTP API for the writing pad.
//!
//! | route              | body       | response                                  |
//! |--------------------|------------|-------------------------------------------|
//! | `POST /api/analyze`| `{text}`   | [`AnalyzePayload`]                        |
//! | `POST /api/hints`  | `{text}`   | `{hints:[Hint]}` for the last sentence    |
//! | `GET /api/patterns`|            | `{patterns:[…]}`                          |
//! | `GET /api/health`  |            | `{status:"ok", patterns:n}`               |
//!
//! Malformed JSON is a 400, empty text on `/api/analyze` a 422. Internal
//! failures are logged and answered with an opaque error id only.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::cors::{AllowOrigin, CorsLayer};

use sakubun_core::grammar::{Hint, Level};

use crate::analyze::{analyze_text, hints_for_text, AnalyzePayload};
use crate::engine::Engine;

#[derive(Debug, Clone, Deserialize)]
pub struct TextRequest {
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HintsResponse {
    pub hints: Vec<Hint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternInfo {
    pub id: String,
    pub display_name: String,
    pub level: Level,
    pub description: String,
    pub dsl: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternsResponse {
    pub patterns: Vec<PatternInfo>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HealthResponse {
    pub status: String,
    pub patterns: usize,
}

type Shared = State<Arc<Engine>>;

fn client_error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(json!({ "error": message.into() }))).into_response()
}

fn internal_error(err: impl std::fmt::Display) -> Response {
    let id = uuid::Uuid::new_v4();
    tracing::error!(%id, "request failed: {err}");
    (StatusCode::INTERNAL_SERVER_ERROR, Json(json!({ "error": "internal error", "id": id.to_string() }))).into_response()
}

fn parse_text(body: &[u8]) -> Result<String, serde_json::Error> {
    serde_json::from_slice::<TextRequest>(body).map(|r| r.text)
}

fn malformed(e: serde_json::Error) -> Response {
    client_error(StatusCode::BAD_REQUEST, format!("malformed request body: {e}"))
}

async fn run_blocking<T: Send + 'static, E: std::fmt::Display + Send + 'static>(
    f: impl FnOnce() -> Result<T, E> + Send + 'static,
) -> Result<T, Response> {
    match tokio::task::spawn_blocking(f).await {
        Ok(Ok(v)) => Ok(v),
        Ok(Err(e)) => Err(internal_error(e)),
        Err(e) => Err(internal_error(e)),
    }
}

async fn analyze(State(engine): Shared, body: Bytes) -> Response {
    let text = match parse_text(&body) {
        Ok(t) => t,
        Err(e) => return malformed(e),
    };
    if text.trim().is_empty() {
        return client_error(StatusCode::UNPROCESSABLE_ENTITY, "text is empty");
    }
    match run_blocking(move || analyze_text(&engine, &text)).await {
        Ok(p) => Json::<AnalyzePayload>(p).into_response(),
        Err(r) => r,
    }
}

async fn hints(State(engine): Shared, body: Bytes) -> Response {
    let text = match parse_text(&body) {
        Ok(t) => t,
        Err(e) => return malformed(e),
    };
    match run_blocking(move || hints_for_text(&engine, &text)).await {
        Ok(hints) => Json(HintsResponse { hints }).into_response(),
        Err(r) => r,
    }
}

async fn patterns(State(engine): Shared) -> Json<PatternsResponse> {
    let patterns = engine
        .registry
        .iter()
        .map(|p| PatternInfo {
            id: p.pattern.id.clone(),
            display_name: p.pattern.display_name.clone(),
            level: p.pattern.level,
            description: p.pattern.description.clone(),
            dsl: p.pattern.dsl.clone(),
        })
        .collect();
    Json(PatternsResponse { patterns })
}

async fn health(State(engine): Shared) -> Json<HealthResponse> {
    Json(HealthResponse { status: "ok".into(), patterns: engine.registry.len() })
}

pub fn cors(origin: &str) -> CorsLayer {
    let allow = if origin == "*" {
        AllowOrigin::any()
    } else {
        AllowOrigin::exact(HeaderValue::from_str(origin).expect("origin validated with the config"))
    };
    CorsLayer::new().allow_origin(allow).allow_methods([Method::GET, Method::POST]).allow_headers([header::CONTENT_TYPE])
}

pub fn router(engine: Arc<Engine>, cors_origin: &str) -> Router {
    Router::new()
        .route("/api/analyze", post(analyze))
        .route("/api/hints", post(hints))
        .route("/api/patterns", get(patterns))
        .route("/api/health", get(health))
        .layer(cors(cors_origin))
        .with_state(engine)
}

pub async fn serve(engine: Arc<Engine>, port: u16, cors_origin: &str) -> std::io::Result<()> {
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(engine, cors_origin)).await
}
