//! Read-only JSON API over a [`Snapshot`].

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use chrono::NaiveDate;
use serde::Serialize;
use serde_json::json;
use snapwatch::DocumentKind;
use tower_http::cors::{AllowOrigin, CorsLayer};

use crate::config::Metric;
use crate::snapshot::{QueryError, ScoreFilter, Snapshot};

pub const DEFAULT_TERM_LIMIT: usize = 100;
pub const MAX_TERM_LIMIT: usize = 10_000;

#[derive(Debug)]
pub enum ApiError {
    BadQuery(String),
    NotFound(String),
    Internal(String),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, msg) = match self {
            ApiError::BadQuery(m) => (StatusCode::UNPROCESSABLE_ENTITY, m),
            ApiError::NotFound(m) => (StatusCode::NOT_FOUND, m),
            ApiError::Internal(m) => (StatusCode::INTERNAL_SERVER_ERROR, m),
        };
        (status, Json(json!({ "error": msg }))).into_response()
    }
}

impl From<QueryError> for ApiError {
    fn from(e: QueryError) -> Self {
        match e {
            QueryError::InvalidRange => ApiError::BadQuery(e.to_string()),
            QueryError::UnknownLegislator(_) => ApiError::NotFound(e.to_string()),
            QueryError::Geo(_) => ApiError::Internal(e.to_string()),
        }
    }
}

type Params = HashMap<String, String>;
type ApiResult<T> = Result<Json<T>, ApiError>;

/// Rejects parameters outside `allowed`.
fn check_keys(params: &Params, allowed: &[&str]) -> Result<(), ApiError> {
    let mut unknown: Vec<&str> = params
        .keys()
        .map(String::as_str)
        .filter(|k| !allowed.contains(k))
        .collect();
    unknown.sort_unstable();
    match unknown.first() {
        Some(k) => Err(ApiError::BadQuery(format!("unknown parameter `{k}`"))),
        None => Ok(()),
    }
}

fn date(params: &Params, key: &str) -> Result<Option<NaiveDate>, ApiError> {
    params
        .get(key)
        .map(|v| {
            NaiveDate::parse_from_str(v, "%Y-%m-%d")
                .map_err(|_| ApiError::BadQuery(format!("`{key}` must be YYYY-MM-DD, got `{v}`")))
        })
        .transpose()
}

fn score_filter(params: &Params) -> Result<ScoreFilter, ApiError> {
    let kind = params
        .get("kind")
        .map(|k| {
            k.parse::<DocumentKind>()
                .map_err(|_| ApiError::BadQuery(format!("`kind` must be article or tweet, got `{k}`")))
        })
        .transpose()?;
    Ok(ScoreFilter {
        from: date(params, "from")?,
        to: date(params, "to")?,
        outlet: params.get("outlet").cloned(),
        kind,
    })
}

#[derive(Serialize)]
struct MetaBody<'a> {
    build_timestamp: chrono::DateTime<chrono::Utc>,
    #[serde(flatten)]
    meta: &'a crate::snapshot::Meta,
    topics: &'a [crate::snapshot::Topic],
}

async fn meta(State(snap): State<Arc<Snapshot>>, Query(params): Query<Params>) -> Result<Response, ApiError> {
    check_keys(&params, &[])?;
    Ok(Json(MetaBody {
        build_timestamp: snap.build_timestamp,
        meta: &snap.meta,
        topics: &snap.topics,
    })
    .into_response())
}

async fn timeseries(
    State(snap): State<Arc<Snapshot>>,
    Query(params): Query<Params>,
) -> ApiResult<Vec<snapwatch::TimePoint>> {
    check_keys(&params, &["from", "to", "outlet", "kind"])?;
    let filter = score_filter(&params)?;
    Ok(Json(snap.timeseries(&filter)?))
}

async fn map(
    State(snap): State<Arc<Snapshot>>,
    Query(params): Query<Params>,
) -> ApiResult<snapwatch::geo::FeatureCollection> {
    check_keys(&params, &["metric", "from", "to"])?;
    let metric = match params.get("metric") {
        Some(m) => m.parse::<Metric>().map_err(ApiError::BadQuery)?,
        None => snap.meta.metric,
    };
    let filter = score_filter(&params)?;
    Ok(Json(snap.map(metric, &filter)?))
}

async fn terms(
    State(snap): State<Arc<Snapshot>>,
    Query(params): Query<Params>,
) -> ApiResult<Vec<snapwatch::terms::TermEntry>> {
    check_keys(&params, &["day", "limit"])?;
    let limit = match params.get("limit") {
        None => DEFAULT_TERM_LIMIT,
        Some(v) => match v.parse::<usize>() {
            Ok(n) if n <= MAX_TERM_LIMIT => n,
            _ => {
                return Err(ApiError::BadQuery(format!(
                    "`limit` must be an integer in 0..={MAX_TERM_LIMIT}, got `{v}`"
                )))
            }
        },
    };
    Ok(Json(snap.terms(date(&params, "day")?, limit)))
}

async fn legislators(
    State(snap): State<Arc<Snapshot>>,
    Query(params): Query<Params>,
) -> ApiResult<Vec<snapwatch::votes::Legislator>> {
    check_keys(&params, &[])?;
    Ok(Json(snap.legislators()))
}

async fn legislator_votes(
    State(snap): State<Arc<Snapshot>>,
    Path(id): Path<String>,
    Query(params): Query<Params>,
) -> ApiResult<Vec<snapwatch::votes::LegislatorVote>> {
    check_keys(&params, &[])?;
    Ok(Json(snap.legislator_votes(&id)?))
}

async fn not_found() -> ApiError {
    ApiError::NotFound("no such route".into())
}

/// All routes. `cors_origin` restricts CORS to one origin; `None` allows any.
pub fn router(snapshot: Arc<Snapshot>, cors_origin: Option<&str>) -> Router {
    let origin = match cors_origin.and_then(|o| HeaderValue::from_str(o).ok()) {
        Some(v) => AllowOrigin::exact(v),
        None => AllowOrigin::any(),
    };
    let cors = CorsLayer::new().allow_origin(origin).allow_methods([axum::http::Method::GET]);
    Router::new()
        .route("/api/meta", get(meta))
        .route("/api/timeseries", get(timeseries))
        .route("/api/map", get(map))
        .route("/api/terms", get(terms))
        .route("/api/legislators", get(legislators))
        .route("/api/legislators/{id}/votes", get(legislator_votes))
        .fallback(not_found)
        .layer(cors)
        .with_state(snapshot)
}

#[derive(Debug, thiserror::Error)]
#[error("cannot bind {addr}: {source}")]
pub struct BindFailure {
    pub addr: SocketAddr,
    pub source: std::io::Error,
}

/// Binds `addr`; the returned listener is ready for [`serve_on`].
pub async fn bind(addr: SocketAddr) -> Result<tokio::net::TcpListener, BindFailure> {
    tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|source| BindFailure { addr, source })
}

pub async fn serve_on(
    listener: tokio::net::TcpListener,
    snapshot: Arc<Snapshot>,
    cors_origin: Option<&str>,
) -> std::io::Result<()> {
    let app = router(snapshot, cors_origin);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
