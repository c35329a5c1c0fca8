//! JSON-over-HTTP shell. Every route builds an [`ApiRequest`] and hands it
//! to the shared engine; the envelope is returned as-is.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::de::DeserializeOwned;
use tokio::net::TcpListener;

use crate::config::ServerConfig;
use crate::engine::{self, error_response, ApiRequest, ApiResponse, Engine};
use crate::error::ApiError;

pub const REQUEST_ID_HEADER: &str = "x-request-id";

type Shared = State<Arc<Engine>>;

pub fn router(engine: Arc<Engine>) -> Router {
    Router::new()
        .route("/triples", post(add_triples).delete(remove_triples))
        .route("/query", post(query))
        .route("/access-check", post(access_check))
        .route("/collaborate", post(collaborate))
        .route("/delegate", post(delegate))
        .route("/environment/apply", post(environment_apply))
        .route("/validate", get(validate))
        .route("/entities/{iri}", get(entity))
        .route("/export", get(export))
        .with_state(engine)
}

fn body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(bytes).map_err(|e| ApiError::BadBody(e.to_string()))
}

fn request_id(engine: &Engine, headers: &HeaderMap) -> String {
    headers
        .get(REQUEST_ID_HEADER)
        .and_then(|v| v.to_str().ok())
        .map_or_else(|| engine.next_request_id(), str::to_string)
}

fn reply(response: ApiResponse) -> Response {
    let status =
        StatusCode::from_u16(response.http_status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    (
        status,
        [(header::CONTENT_TYPE, "application/json")],
        response.to_json(),
    )
        .into_response()
}

fn run(engine: &Engine, headers: &HeaderMap, request: Result<ApiRequest, ApiError>) -> Response {
    let id = request_id(engine, headers);
    reply(match request {
        Ok(request) => engine.dispatch(id, &request),
        Err(error) => error_response(id, &error),
    })
}

async fn add_triples(State(e): Shared, headers: HeaderMap, bytes: Bytes) -> Response {
    run(&e, &headers, body(&bytes).map(ApiRequest::AddTriples))
}

async fn remove_triples(State(e): Shared, headers: HeaderMap, bytes: Bytes) -> Response {
    run(&e, &headers, body(&bytes).map(ApiRequest::RemoveTriples))
}

async fn query(State(e): Shared, headers: HeaderMap, bytes: Bytes) -> Response {
    run(&e, &headers, body(&bytes).map(ApiRequest::Query))
}

async fn access_check(State(e): Shared, headers: HeaderMap, bytes: Bytes) -> Response {
    run(&e, &headers, body(&bytes).map(ApiRequest::AccessCheck))
}

async fn collaborate(State(e): Shared, headers: HeaderMap, bytes: Bytes) -> Response {
    run(&e, &headers, body(&bytes).map(ApiRequest::Collaborate))
}

async fn delegate(State(e): Shared, headers: HeaderMap, bytes: Bytes) -> Response {
    run(&e, &headers, body(&bytes).map(ApiRequest::Delegate))
}

async fn environment_apply(State(e): Shared, headers: HeaderMap, bytes: Bytes) -> Response {
    run(&e, &headers, body(&bytes).map(ApiRequest::EnvironmentApply))
}

async fn validate(State(e): Shared, headers: HeaderMap) -> Response {
    run(&e, &headers, Ok(ApiRequest::Validate))
}

async fn entity(State(e): Shared, headers: HeaderMap, Path(iri): Path<String>) -> Response {
    run(&e, &headers, Ok(ApiRequest::Entity { iri }))
}

async fn export(State(e): Shared, headers: HeaderMap) -> Response {
    run(&e, &headers, Ok(ApiRequest::Export))
}

/// Loads the configured data and serves until interrupted.
pub async fn serve(config: &ServerConfig) -> Result<(), Box<dyn std::error::Error>> {
    let engine = engine::load(
        config.data.as_deref(),
        &config.namespace,
        config.inference,
        config.clock,
    )?;
    let listener = TcpListener::bind(config.listen).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(engine)))
        .with_graceful_shutdown(async {
            tokio::signal::ctrl_c().await.ok();
        })
        .await?;
    Ok(())
}
