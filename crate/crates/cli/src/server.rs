//! HTTP front end of the registry.
//!
//! | method | path | success |
//! |--------|------|---------|
//! | GET | `/fdo/{gupri}` | 200 `application/trig`, strong `ETag`; 304 on matching `If-None-Match` |
//! | GET | `/fdo/{gupri}/type` | 200 json classification |
//! | POST | `/deposit[?force=true]` | 200 json `[{gupri, etag}]` |
//!
//! The gupri path segment is percent-encoded. Errors are
//! `application/problem+json` with status 404, 409 or 422.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use fdof_core::validator::FindingRecord;
use fdof_core::{parse_trig, RegistryError, RegistryStore};
use serde::{Deserialize, Serialize};
use tokio::net::TcpListener;

pub const TRIG: &str = "application/trig";
pub const PROBLEM_JSON: &str = "application/problem+json";

#[derive(Debug, Serialize, Deserialize)]
pub struct Problem {
    #[serde(rename = "type")]
    pub kind: String,
    pub title: String,
    pub status: u16,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub findings: Vec<FindingRecord>,
}

fn problem(status: StatusCode, detail: String, findings: Vec<FindingRecord>) -> Response {
    let body = Problem {
        kind: "about:blank".into(),
        title: status.canonical_reason().unwrap_or("error").into(),
        status: status.as_u16(),
        detail,
        findings,
    };
    let mut resp = (status, Json(body)).into_response();
    resp.headers_mut()
        .insert(header::CONTENT_TYPE, HeaderValue::from_static(PROBLEM_JSON));
    resp
}

fn error_response(err: RegistryError) -> Response {
    match err {
        RegistryError::NotFound(_) => problem(StatusCode::NOT_FOUND, err.to_string(), Vec::new()),
        RegistryError::Conflict { .. } => problem(StatusCode::CONFLICT, err.to_string(), Vec::new()),
        RegistryError::Unprocessable(_) => problem(StatusCode::UNPROCESSABLE_ENTITY, err.to_string(), Vec::new()),
        RegistryError::Invalid(ref report) => {
            let findings = report.violations().map(FindingRecord::from).collect();
            problem(StatusCode::UNPROCESSABLE_ENTITY, err.to_string(), findings)
        }
        other => problem(StatusCode::INTERNAL_SERVER_ERROR, other.to_string(), Vec::new()),
    }
}

type Shared = Arc<RegistryStore>;

async fn resolve(State(store): State<Shared>, Path(id): Path<String>, headers: HeaderMap) -> Response {
    let res = match store.resolve(&id) {
        Ok(r) => r,
        Err(e) => return error_response(e),
    };
    let etag = format!("\"{}\"", res.etag);
    let etag_value = HeaderValue::from_str(&etag).expect("hex etag is a valid header");
    let matches = headers
        .get_all(header::IF_NONE_MATCH)
        .iter()
        .filter_map(|v| v.to_str().ok())
        .flat_map(|v| v.split(','))
        .any(|t| t.trim() == etag || t.trim() == "*");
    if matches {
        return (StatusCode::NOT_MODIFIED, [(header::ETAG, etag_value)]).into_response();
    }
    (
        StatusCode::OK,
        [
            (header::CONTENT_TYPE, HeaderValue::from_static(TRIG)),
            (header::ETAG, etag_value),
        ],
        res.trig(),
    )
        .into_response()
}

async fn describe_type(State(store): State<Shared>, Path(id): Path<String>) -> Response {
    match store.describe_type(&id) {
        Ok(c) => Json(c).into_response(),
        Err(e) => error_response(e),
    }
}

#[derive(Deserialize)]
struct DepositQuery {
    #[serde(default)]
    force: bool,
}

async fn deposit(State(store): State<Shared>, Query(q): Query<DepositQuery>, body: String) -> Response {
    let ds = match parse_trig(&body) {
        Ok(ds) => ds,
        Err(e) => return problem(StatusCode::UNPROCESSABLE_ENTITY, format!("TriG body: {e}"), Vec::new()),
    };
    let outcome = tokio::task::spawn_blocking(move || store.deposit(&ds, q.force)).await;
    match outcome {
        Ok(Ok(receipt)) => Json(receipt).into_response(),
        Ok(Err(e)) => error_response(e),
        Err(join) => problem(StatusCode::INTERNAL_SERVER_ERROR, join.to_string(), Vec::new()),
    }
}

pub fn router(store: Shared) -> Router {
    Router::new()
        .route("/fdo/{id}", get(resolve))
        .route("/fdo/{id}/type", get(describe_type))
        .route("/deposit", post(deposit))
        .with_state(store)
}

/// Binds `addr` and serves in the background; returns the bound address.
pub async fn spawn(store: Shared, addr: SocketAddr) -> std::io::Result<(SocketAddr, tokio::task::JoinHandle<()>)> {
    let listener = TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    let handle = tokio::spawn(async move {
        axum::serve(listener, router(store)).await.expect("server stopped");
    });
    Ok((local, handle))
}

/// Serves until interrupted.
pub async fn run(store: Shared, addr: SocketAddr) -> std::io::Result<()> {
    let listener = TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(store))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
