#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request};
use axum::Router;
use http_body_util::BodyExt;
use semioe_api::engine::{self, Engine};
use semioe_api::{http, Clock};
use semioe_core::vocab::DEFAULT_INSTANCE_NS;
use serde_json::Value;
use tower::ServiceExt;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn clock(at: &str) -> Clock {
    at.parse().unwrap()
}

pub fn engine(name: &str, at: &str) -> Engine {
    engine::load(Some(&fixture(name)), DEFAULT_INSTANCE_NS, true, clock(at)).unwrap()
}

pub fn engine_from_source(source: &str, at: &str) -> Engine {
    let path = temp_file("fixture.ttl");
    std::fs::write(&path, source).unwrap();
    let engine = engine::load(Some(&path), DEFAULT_INSTANCE_NS, true, clock(at)).unwrap();
    std::fs::remove_file(path).ok();
    engine
}

pub fn router(engine: Engine) -> Router {
    http::router(Arc::new(engine))
}

/// A path unique to this process and call site name.
pub fn temp_file(name: &str) -> PathBuf {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static NEXT: AtomicUsize = AtomicUsize::new(0);
    let n = NEXT.fetch_add(1, Ordering::Relaxed);
    std::env::temp_dir().join(format!("semioe-test-{}-{n}-{name}", std::process::id()))
}

pub struct Reply {
    pub status: u16,
    pub body: Value,
    pub text: String,
}

pub async fn call(
    router: &Router,
    method: Method,
    uri: &str,
    body: Option<Value>,
    request_id: Option<&str>,
) -> Reply {
    let mut builder = Request::builder().method(method).uri(uri);
    if let Some(id) = request_id {
        builder = builder.header(http::REQUEST_ID_HEADER, id);
    }
    let body = match body {
        Some(v) => Body::from(v.to_string()),
        None => Body::empty(),
    };
    let response = router
        .clone()
        .oneshot(builder.body(body).unwrap())
        .await
        .unwrap();
    let status = response.status().as_u16();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    let text = String::from_utf8(bytes.to_vec()).unwrap();
    let body = serde_json::from_str(&text).unwrap_or(Value::Null);
    Reply { status, body, text }
}

pub async fn post(router: &Router, uri: &str, body: Value) -> Reply {
    call(router, Method::POST, uri, Some(body), None).await
}

pub async fn get(router: &Router, uri: &str) -> Reply {
    call(router, Method::GET, uri, None, None).await
}

/// Runs the CLI in-process; returns (exit code, stdout, stderr).
pub fn cli(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("semioe").chain(args.iter().copied());
    let code = semioe_api::cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

pub fn d(local: &str) -> String {
    format!("{DEFAULT_INSTANCE_NS}{local}")
}
