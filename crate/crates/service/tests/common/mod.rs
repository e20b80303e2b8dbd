#![allow(dead_code)]

use std::path::PathBuf;

use snapwatch_service::{build_snapshot, Config, Snapshot};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn lexicon_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/valence.tsv")
}

/// Small LDA settings keep the fixture build fast.
pub fn test_config() -> Config {
    let mut cfg = Config::default();
    cfg.lda.k = 2;
    cfg.lda.iterations = 50;
    cfg
}

pub fn fixture_snapshot() -> Snapshot {
    build_snapshot(
        &test_config(),
        &fixture("docs.jsonl"),
        &lexicon_path(),
        Some(&fixture("bills.json")),
    )
    .expect("fixture snapshot builds")
}

pub mod schema;

use std::sync::Arc;

/// Sends a GET through the router without a socket.
pub async fn get(router: &axum::Router, uri: &str) -> (u16, serde_json::Value) {
    use tower::ServiceExt;
    let req = axum::http::Request::builder()
        .uri(uri)
        .body(axum::body::Body::empty())
        .unwrap();
    let resp = router.clone().oneshot(req).await.unwrap();
    let status = resp.status().as_u16();
    let bytes = axum::body::to_bytes(resp.into_body(), usize::MAX).await.unwrap();
    (status, serde_json::from_slice(&bytes).expect("JSON body"))
}

pub fn fixture_router() -> axum::Router {
    snapwatch_service::api::router(Arc::new(fixture_snapshot()), None)
}
