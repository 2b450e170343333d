//! Resolution client for a running registry.

use percent_encoding::{utf8_percent_encode, NON_ALPHANUMERIC};
use reqwest::StatusCode;

#[derive(Debug)]
pub enum Outcome {
    /// Response body and etag (without quotes).
    Found { body: String, etag: Option<String> },
    /// 404, 409 or 422, with the problem detail.
    Refused { status: u16, detail: String },
}

pub fn fdo_url(endpoint: &str, gupri: &str, suffix: &str) -> String {
    format!(
        "{}/fdo/{}{suffix}",
        endpoint.trim_end_matches('/'),
        utf8_percent_encode(gupri, NON_ALPHANUMERIC)
    )
}

async fn read(resp: reqwest::Response) -> Result<Outcome, reqwest::Error> {
    let status = resp.status();
    let etag = resp
        .headers()
        .get(reqwest::header::ETAG)
        .and_then(|v| v.to_str().ok())
        .map(|v| v.trim_matches('"').to_owned());
    let body = resp.text().await?;
    if status == StatusCode::OK {
        return Ok(Outcome::Found { body, etag });
    }
    let detail = serde_json::from_str::<serde_json::Value>(&body)
        .ok()
        .and_then(|v| v.get("detail").and_then(|d| d.as_str()).map(str::to_owned))
        .unwrap_or(body);
    Ok(Outcome::Refused {
        status: status.as_u16(),
        detail,
    })
}

pub async fn resolve(endpoint: &str, gupri: &str) -> Result<Outcome, reqwest::Error> {
    read(reqwest::get(fdo_url(endpoint, gupri, "")).await?).await
}

pub async fn describe_type(endpoint: &str, gupri: &str) -> Result<Outcome, reqwest::Error> {
    read(reqwest::get(fdo_url(endpoint, gupri, "/type")).await?).await
}

pub async fn deposit(endpoint: &str, trig: String, force: bool) -> Result<Outcome, reqwest::Error> {
    let url = format!(
        "{}/deposit{}",
        endpoint.trim_end_matches('/'),
        if force { "?force=true" } else { "" }
    );
    let resp = reqwest::Client::new()
        .post(url)
        .header(reqwest::header::CONTENT_TYPE, crate::server::TRIG)
        .body(trig)
        .send()
        .await?;
    read(resp).await
}
