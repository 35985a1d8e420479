//! HTTP front end for a [`ModelBundle`].
//!
//! Routes: `POST /classify?k=20&mode=asym|sym` with a Stroke JSON body,
//! `GET /health` and `GET /symbols`.

use std::collections::BTreeMap;
use std::future::IntoFuture;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use pqdtw_core::stroke::parse_strokes;
use pqdtw_core::{Candidate, Error, ModelBundle, QueryMode};
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

pub const DEFAULT_K: usize = 20;

/// Shared model slot; empty until loading finishes.
pub type ModelSlot = Arc<OnceLock<ModelBundle>>;

#[derive(Debug, Deserialize)]
pub struct ClassifyParams {
    pub k: Option<usize>,
    pub mode: Option<String>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ClassifyResponse {
    pub candidates: Vec<Candidate>,
    pub latency_ms: f64,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct Health {
    pub status: String,
    pub model_loaded: bool,
    pub n_symbols: usize,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct SymbolInfo {
    pub symbol: String,
    pub display: String,
    pub example_count: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
}

pub struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(ErrorBody { error: self.1 })).into_response()
    }
}

fn not_loaded() -> ApiError {
    ApiError(StatusCode::SERVICE_UNAVAILABLE, "model not loaded".into())
}

fn bad_request(msg: impl Into<String>) -> ApiError {
    ApiError(StatusCode::BAD_REQUEST, msg.into())
}

pub fn router(model: ModelSlot) -> Router {
    Router::new()
        .route("/classify", post(classify))
        .route("/health", get(health))
        .route("/symbols", get(symbols))
        .layer(CorsLayer::permissive())
        .with_state(model)
}

async fn classify(
    State(model): State<ModelSlot>,
    Query(params): Query<ClassifyParams>,
    body: String,
) -> Result<Json<ClassifyResponse>, ApiError> {
    let start = Instant::now();
    if model.get().is_none() {
        return Err(not_loaded());
    }
    let k = params.k.unwrap_or(DEFAULT_K);
    if k == 0 {
        return Err(bad_request("k must be positive"));
    }
    let mode: QueryMode = match params.mode.as_deref() {
        None => QueryMode::Asym,
        Some(m) => m.parse().map_err(|e: Error| bad_request(e.to_string()))?,
    };
    let strokes = parse_strokes(&body).map_err(|e| bad_request(format!("invalid stroke JSON: {e}")))?;
    let candidates = tokio::task::spawn_blocking(move || {
        let bundle = model.get().expect("checked above");
        bundle.classify(&strokes, k, mode)
    })
    .await
    .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
    .map_err(|e| match e {
        Error::DegenerateStroke(_) | Error::InvalidArgument(_) => bad_request(e.to_string()),
        other => ApiError(StatusCode::INTERNAL_SERVER_ERROR, other.to_string()),
    })?;
    Ok(Json(ClassifyResponse {
        candidates,
        latency_ms: start.elapsed().as_secs_f64() * 1e3,
    }))
}

async fn health(State(model): State<ModelSlot>) -> Json<Health> {
    let bundle = model.get();
    Json(Health {
        status: "ok".into(),
        model_loaded: bundle.is_some(),
        n_symbols: bundle.map_or(0, |b| b.symbol_ids().len()),
    })
}

async fn symbols(State(model): State<ModelSlot>) -> Result<Json<Vec<SymbolInfo>>, ApiError> {
    let bundle = model.get().ok_or_else(not_loaded)?;
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for l in &bundle.labels {
        *counts.entry(l).or_default() += 1;
    }
    Ok(Json(
        counts
            .into_iter()
            .map(|(id, example_count)| SymbolInfo {
                symbol: id.to_string(),
                display: bundle.display_name(id).to_string(),
                example_count,
            })
            .collect(),
    ))
}

/// Binds `addr`, loads the bundle in the background and serves until Ctrl-C.
pub async fn serve(model_path: PathBuf, addr: SocketAddr) -> anyhow::Result<()> {
    let slot: ModelSlot = Arc::new(OnceLock::new());
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    let loader = {
        let slot = slot.clone();
        tokio::task::spawn_blocking(move || -> anyhow::Result<()> {
            let bundle = ModelBundle::load(&model_path)
                .map_err(|e| anyhow::anyhow!("loading {}: {e}", model_path.display()))?;
            log::info!(
                "model loaded: {} examples, {} symbols",
                bundle.codes.len(),
                bundle.symbol_ids().len()
            );
            let _ = slot.set(bundle);
            Ok(())
        })
    };
    let server = tokio::spawn(
        axum::serve(listener, router(slot))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .into_future(),
    );
    loader.await??;
    server.await??;
    Ok(())
}
