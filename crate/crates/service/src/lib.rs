//! JSON-over-HTTP analysis API.
//!
//! Point sets travel as sorted arrays of indices 0..81. Errors come back as
//! `{"error": "..."}` with status 400 for malformed input and 422 for input
//! that parses but is the wrong kind of object.

use std::collections::{BTreeMap, HashMap};
use std::net::SocketAddr;
use std::sync::{Arc, Mutex};

use ag43_core::caps::{completion_counts, contained_lines, find_anchor, is_cap, is_complete_cap, MaximalCap};
use ag43_core::demicaps::{corresponding_cap_of, decompositions, recognize_demicap, Demicap};
use ag43_core::gf3geom::{Point, PointSet};
use ag43_core::partitions::{build_grid36_from, pentad_structure, unique_partition, CapPartition, GridOf36};
use ag43_core::render::{ascii_partition, ascii_set, svg_partition, svg_set, Annotate};
use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::net::TcpListener;
use tower_http::cors::CorsLayer;

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> ApiError {
        ApiError { status: StatusCode::BAD_REQUEST, message: message.into() }
    }

    fn unprocessable(message: impl Into<String>) -> ApiError {
        ApiError { status: StatusCode::UNPROCESSABLE_ENTITY, message: message.into() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;
type Cache = HashMap<(&'static str, Vec<u128>), Arc<Value>>;

/// Responses for heavy endpoints, keyed by endpoint and canonical input.
#[derive(Clone, Default)]
pub struct AppState {
    cache: Arc<Mutex<Cache>>,
}

impl AppState {
    fn cached(&self, key: (&'static str, Vec<u128>)) -> Option<Arc<Value>> {
        self.cache.lock().expect("cache lock").get(&key).cloned()
    }

    fn store(&self, key: (&'static str, Vec<u128>), v: Value) -> Arc<Value> {
        let v = Arc::new(v);
        self.cache.lock().expect("cache lock").insert(key, v.clone());
        v
    }
}

pub fn router() -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/analyze", post(analyze))
        .route("/decompositions", post(decompositions_handler))
        .route("/partition", post(partition))
        .route("/grid36", post(grid36_handler))
        .route("/render", post(render))
        .with_state(AppState::default())
        .layer(CorsLayer::permissive())
}

/// Binds `127.0.0.1:port`; port 0 picks a free one.
pub async fn bind(port: u16) -> std::io::Result<(TcpListener, SocketAddr)> {
    let listener = TcpListener::bind(("127.0.0.1", port)).await?;
    let addr = listener.local_addr()?;
    Ok((listener, addr))
}

pub async fn serve(listener: TcpListener) -> std::io::Result<()> {
    tracing::info!(addr = ?listener.local_addr().ok(), "serving");
    axum::serve(listener, router()).await
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid request body: {e}")))
}

/// Rejects indices outside 0..81 and repeats.
pub fn point_set(indices: &[i64]) -> ApiResult<PointSet> {
    let mut s = PointSet::EMPTY;
    for &i in indices {
        let p = usize::try_from(i)
            .ok()
            .and_then(|i| Point::new(i).ok())
            .ok_or_else(|| ApiError::bad_request(format!("point {i} out of range 0..81")))?;
        if s.contains(p) {
            return Err(ApiError::bad_request(format!("point {i} repeated")));
        }
        s.insert(p);
    }
    Ok(s)
}

fn maximal_cap(indices: &[i64]) -> ApiResult<MaximalCap> {
    MaximalCap::new(point_set(indices)?).map_err(|e| ApiError::unprocessable(format!("not a maximal cap: {e}")))
}

fn demicap(indices: &[i64]) -> ApiResult<Demicap> {
    recognize_demicap(point_set(indices)?).map_err(|e| ApiError::unprocessable(format!("not a demicap: {e}")))
}

fn idx(s: PointSet) -> Vec<u8> {
    s.indices()
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError {
        status: StatusCode::INTERNAL_SERVER_ERROR,
        message: e.to_string(),
    })
}

async fn health() -> Json<Value> {
    Json(json!({ "status": "ok" }))
}

#[derive(Deserialize)]
struct PointsRequest {
    points: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisResponse {
    pub points: Vec<u8>,
    pub is_cap: bool,
    pub is_complete: bool,
    pub is_maximal_cap: bool,
    pub anchor: Option<u8>,
    pub is_demicap: bool,
    pub demicap_anchor: Option<u8>,
    /// Lines completed by each non-member.
    pub completion_counts: BTreeMap<u8, u8>,
    /// Lines contained in the set.
    pub violations: Vec<[u8; 3]>,
}

pub fn analysis(s: PointSet) -> AnalysisResponse {
    let anchor = find_anchor(s).ok();
    let demicap_anchor = recognize_demicap(s).ok().map(|d| d.anchor());
    AnalysisResponse {
        points: idx(s),
        is_cap: is_cap(s),
        is_complete: is_complete_cap(s).unwrap_or(false),
        is_maximal_cap: anchor.is_some(),
        anchor: anchor.map(u8::from),
        is_demicap: demicap_anchor.is_some(),
        demicap_anchor: demicap_anchor.map(u8::from),
        completion_counts: completion_counts(s).to_map(s),
        violations: contained_lines(s).iter().map(|l| l.points.map(u8::from)).collect(),
    }
}

async fn analyze(body: Bytes) -> ApiResult<Json<AnalysisResponse>> {
    let req: PointsRequest = parse_body(&body)?;
    Ok(Json(analysis(point_set(&req.points)?)))
}

#[derive(Deserialize)]
struct CapRequest {
    cap: Vec<i64>,
}

async fn decompositions_handler(State(state): State<AppState>, body: Bytes) -> ApiResult<Json<Value>> {
    let req: CapRequest = parse_body(&body)?;
    let cap = maximal_cap(&req.cap)?;
    let key = ("decompositions", vec![cap.points().bits()]);
    if let Some(v) = state.cached(key.clone()) {
        return Ok(Json((*v).clone()));
    }
    let value = blocking(move || -> ApiResult<Value> {
        let pairs = decompositions(&cap)
            .iter()
            .map(|d| {
                let image = corresponding_cap_of(d).map_err(|e| ApiError::unprocessable(e.to_string()))?;
                Ok(json!({
                    "half_a": idx(d.half_a.points()),
                    "half_b": idx(d.half_b.points()),
                    "image_cap": idx(image.points()),
                }))
            })
            .collect::<ApiResult<Vec<Value>>>()?;
        Ok(json!({ "cap": idx(cap.points()), "anchor": u8::from(cap.anchor()), "pairs": pairs }))
    })
    .await??;
    Ok(Json((*state.store(key, value)).clone()))
}

#[derive(Deserialize)]
struct PartitionRequest {
    cap: Vec<i64>,
    half_a: Vec<i64>,
    half_b: Vec<i64>,
}

fn partition_json(p: &CapPartition) -> Value {
    json!({
        "anchor": u8::from(p.anchor()),
        "blocks": p.blocks().iter().map(|b| idx(b.points())).collect::<Vec<_>>(),
    })
}

async fn partition(body: Bytes) -> ApiResult<Json<Value>> {
    let req: PartitionRequest = parse_body(&body)?;
    let cap = maximal_cap(&req.cap)?;
    let (a, b) = (demicap(&req.half_a)?, demicap(&req.half_b)?);
    let up = blocking(move || unique_partition(&cap, &a, &b))
        .await?
        .map_err(|e| ApiError::unprocessable(e.to_string()))?;
    let cross = |c: &ag43_core::partitions::CrossPairing| {
        json!({
            "cap": idx(c.cap.points()),
            "in_s1": idx(c.in_s1.points()),
            "in_s2": idx(c.in_s2.points()),
            "corresponds_to": idx(c.image.points()),
        })
    };
    Ok(Json(json!({
        "cap": idx(cap.points()),
        "c_prime": idx(up.c_prime.points()),
        "s1": idx(up.s1),
        "s2": idx(up.s2),
        "s1_demicaps": up.s1_demicaps.iter().map(|d| idx(d.points())).collect::<Vec<_>>(),
        "s2_demicaps": up.s2_demicaps.iter().map(|d| idx(d.points())).collect::<Vec<_>>(),
        "m1": cross(&up.m1),
        "m2": cross(&up.m2),
        "partition": partition_json(&up.partition),
    })))
}

pub fn grid_json(g: &GridOf36) -> Value {
    let pentads = |half| {
        let r = pentad_structure(half);
        json!({
            "alines": r.alines.keys().map(|l| [u8::from(l.pair.0), u8::from(l.pair.1)]).collect::<Vec<_>>(),
            "each_aline_twice": r.each_aline_twice,
            "pairwise_one_aline": r.pairwise_one_aline,
        })
    };
    json!({
        "cap": idx(g.base.points()),
        "anchor": u8::from(g.base.anchor()),
        "rows": g.rows.iter().map(|d| idx(d.points())).collect::<Vec<_>>(),
        "cols": g.cols.iter().map(|d| idx(d.points())).collect::<Vec<_>>(),
        "caps": g.caps.iter().map(|row| row.iter().map(|m| idx(m.points())).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "row_pentads": pentads(&g.rows),
        "col_pentads": pentads(&g.cols),
    })
}

async fn grid36_handler(State(state): State<AppState>, body: Bytes) -> ApiResult<Json<Value>> {
    let req: CapRequest = parse_body(&body)?;
    let cap = maximal_cap(&req.cap)?;
    let key = ("grid36", vec![cap.points().bits()]);
    if let Some(v) = state.cached(key.clone()) {
        return Ok(Json((*v).clone()));
    }
    let grid = blocking(move || build_grid36_from(&decompositions(&cap)[0]))
        .await?
        .map_err(|e| ApiError::unprocessable(e.to_string()))?;
    Ok(Json((*state.store(key, grid_json(&grid))).clone()))
}

#[derive(Deserialize)]
struct RenderRequest {
    points: Option<Vec<i64>>,
    partition: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    format: Option<String>,
    #[serde(default)]
    counts: bool,
}

async fn render(body: Bytes) -> ApiResult<Response> {
    let req: RenderRequest = parse_body(&body)?;
    let svg = match req.format.as_deref() {
        None | Some("svg") => true,
        Some("ascii") => false,
        Some(other) => return Err(ApiError::bad_request(format!("unknown format {other:?}"))),
    };
    let annotate = if req.counts { Annotate::Counts } else { Annotate::None };
    let text = match (req.points, req.partition) {
        (Some(points), None) => {
            let s = point_set(&points)?;
            if svg {
                svg_set(s, annotate)
            } else {
                ascii_set(s, annotate)
            }
        }
        (None, Some(blocks)) => {
            let caps: Vec<MaximalCap> = blocks.iter().map(|b| maximal_cap(b)).collect::<ApiResult<_>>()?;
            let caps: [MaximalCap; 4] =
                caps.try_into().map_err(|_| ApiError::unprocessable("a partition has four blocks"))?;
            let p = CapPartition::new(caps[0].anchor(), caps).map_err(|e| ApiError::unprocessable(e.to_string()))?;
            if svg {
                svg_partition(&p)
            } else {
                ascii_partition(&p)
            }
        }
        _ => return Err(ApiError::bad_request("give exactly one of points or partition")),
    };
    let content_type = if svg { "image/svg+xml" } else { "text/plain; charset=utf-8" };
    Ok(([(header::CONTENT_TYPE, content_type)], text).into_response())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ag43_core::caps::canonical_cap;
    use ag43_core::demicaps::one_line_completers;

    #[test]
    fn point_validation() {
        assert_eq!(point_set(&[0, 5, 80]).unwrap().len(), 3);
        assert_eq!(point_set(&[81]).unwrap_err().status, StatusCode::BAD_REQUEST);
        assert_eq!(point_set(&[-1]).unwrap_err().status, StatusCode::BAD_REQUEST);
        assert_eq!(point_set(&[3, 3]).unwrap_err().status, StatusCode::BAD_REQUEST);
    }

    #[test]
    fn analysis_of_canonical_cap() {
        let a = analysis(canonical_cap().points());
        assert!(a.is_cap && a.is_maximal_cap && a.is_complete && !a.is_demicap);
        assert_eq!(a.anchor, Some(0));
        assert_eq!(a.completion_counts.values().filter(|&&k| k == 3).count(), 60);
        assert!(a.violations.is_empty());
    }

    #[test]
    fn demicap_analysis() {
        let c = canonical_cap();
        let d = decompositions(&c)[0].half_a;
        let a = analysis(d.points());
        assert!(a.is_demicap && !a.is_maximal_cap);
        assert_eq!(a.demicap_anchor, Some(0));
        let split = one_line_completers(&d);
        assert_eq!(a.completion_counts.values().filter(|&&k| k == 1).count(), split.ones.len());
    }
}
