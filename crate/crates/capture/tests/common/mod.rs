#![allow(dead_code)]

use std::sync::{Arc, RwLock};

use axum::body::{to_bytes, Body};
use axum::http::{Request, StatusCode};
use axum::Router;
use capture::{router, AppState};
use capture_core::corpus::script_records;
use capture_core::{default_rules, default_schema, CaptureEngine, RecordStore};
use serde_json::Value;
use tower::ServiceExt;

/// A fresh in-memory service preloaded with the five-record script.
pub fn app() -> Router {
    let mut store = RecordStore::new(default_schema());
    for r in script_records() {
        store.finalize_record(r).unwrap();
    }
    let engine = CaptureEngine::new(store, default_rules()).unwrap();
    router(Arc::new(RwLock::new(AppState::in_memory(engine))))
}

pub async fn call(app: &Router, method: &str, uri: &str, body: Option<&Value>) -> (StatusCode, Vec<u8>) {
    let builder = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => builder.header("content-type", "application/json").body(Body::from(b.to_string())),
        None => builder.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = to_bytes(resp.into_body(), usize::MAX).await.unwrap();
    (status, bytes.to_vec())
}

pub async fn call_json(app: &Router, method: &str, uri: &str, body: Option<&Value>) -> (StatusCode, Value) {
    let (status, bytes) = call(app, method, uri, body).await;
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}
