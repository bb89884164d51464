use std::collections::BTreeSet;

use ag43_core::caps::canonical_cap;
use ag43_core::demicaps::decompositions;
use ag43_service::{router, AnalysisResponse};
use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(method: &str, uri: &str, body: Option<Value>) -> (StatusCode, String, Vec<u8>) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header(header::CONTENT_TYPE, "application/json")
        .body(body.map_or(Body::empty(), |b| Body::from(b.to_string())))
        .unwrap();
    let resp = router().oneshot(req).await.unwrap();
    let status = resp.status();
    let ctype = resp.headers().get(header::CONTENT_TYPE).map(|v| v.to_str().unwrap().to_string()).unwrap_or_default();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, ctype, bytes)
}

async fn post_json(uri: &str, body: Value) -> (StatusCode, Value) {
    let (status, _, bytes) = call("POST", uri, Some(body)).await;
    (status, serde_json::from_slice(&bytes).unwrap())
}

fn c0() -> Vec<u8> {
    canonical_cap().points().indices()
}

#[tokio::test]
async fn health() {
    let (status, _, body) = call("GET", "/health", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(serde_json::from_slice::<Value>(&body).unwrap(), json!({"status": "ok"}));
}

#[tokio::test]
async fn analyze_canonical_cap() {
    let (status, v) = post_json("/analyze", json!({"points": c0()})).await;
    assert_eq!(status, StatusCode::OK);
    let a: AnalysisResponse = serde_json::from_value(v).unwrap();
    assert!(a.is_maximal_cap && a.is_cap);
    assert_eq!(a.anchor, Some(0));
    assert_eq!(a.completion_counts.values().filter(|&&k| k == 3).count(), 60);
    assert_eq!(a.completion_counts[&0], 10);
}

#[tokio::test]
async fn analyze_demicap_and_line() {
    let d = decompositions(&canonical_cap())[0].half_a;
    let (_, v) = post_json("/analyze", json!({"points": d.points().indices()})).await;
    let a: AnalysisResponse = serde_json::from_value(v).unwrap();
    assert!(a.is_demicap);
    let ones = a.completion_counts.iter().filter(|(&p, &k)| k == 1 && p != 0).count();
    let zeros = a.completion_counts.iter().filter(|(&p, &k)| k == 0 && p != 0).count();
    assert_eq!((ones, zeros), (40, 30));

    let (_, v) = post_json("/analyze", json!({"points": [0, 1, 2]})).await;
    let a: AnalysisResponse = serde_json::from_value(v).unwrap();
    assert!(!a.is_cap);
    assert_eq!(a.violations, vec![[0, 1, 2]]);
}

#[tokio::test]
async fn analyze_rejects_bad_points() {
    for body in [json!({"points": [81]}), json!({"points": [4, 4]}), json!({"points": "x"}), json!({})] {
        let (status, v) = post_json("/analyze", body).await;
        assert_eq!(status, StatusCode::BAD_REQUEST);
        assert!(v["error"].is_string());
    }
}

#[tokio::test]
async fn decompositions_of_canonical_cap() {
    let (status, v) = post_json("/decompositions", json!({"cap": c0()})).await;
    assert_eq!(status, StatusCode::OK);
    let pairs = v["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 36);
    let cap: BTreeSet<u64> = c0().iter().map(|&x| x as u64).collect();
    let mut images = BTreeSet::new();
    for p in pairs {
        let img: BTreeSet<u64> = p["image_cap"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
        assert!(img.is_disjoint(&cap));
        images.insert(img);
    }
    assert_eq!(images.len(), 36);

    let (status, v) = post_json("/decompositions", json!({"cap": [0, 1, 3]})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(v["error"].is_string());
}

#[tokio::test]
async fn partition_bundle() {
    let dec = decompositions(&canonical_cap())[0];
    let body = json!({"cap": c0(), "half_a": dec.half_a.points().indices(), "half_b": dec.half_b.points().indices()});
    let (status, v) = post_json("/partition", body).await;
    assert_eq!(status, StatusCode::OK);
    let blocks = v["partition"]["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 4);
    let mut covered: BTreeSet<u64> = BTreeSet::from([v["partition"]["anchor"].as_u64().unwrap()]);
    for b in blocks {
        for x in b.as_array().unwrap() {
            assert!(covered.insert(x.as_u64().unwrap()));
        }
    }
    assert_eq!(covered.len(), 81);
    assert_eq!(v["m1"]["corresponds_to"], v["m2"]["cap"]);

    let other = decompositions(&canonical_cap())[1];
    let bad = json!({"cap": c0(), "half_a": dec.half_a.points().indices(), "half_b": other.half_b.points().indices()});
    let (status, _) = post_json("/partition", bad).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn grid36_endpoint() {
    let (status, v) = post_json("/grid36", json!({"cap": c0()})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    assert_eq!(v["cols"].as_array().unwrap().len(), 6);
    let caps: Vec<&Value> = v["caps"].as_array().unwrap().iter().flat_map(|r| r.as_array().unwrap()).collect();
    assert_eq!(caps.len(), 36);
    for c in caps {
        let pts: Vec<i64> = c.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
        let (_, a) = post_json("/analyze", json!({"points": pts})).await;
        assert_eq!(a["is_maximal_cap"], true);
    }
    let (status, _) = post_json("/grid36", json!({"cap": [1, 2]})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn identical_requests_identical_responses() {
    let app = router();
    let mut bodies = Vec::new();
    for _ in 0..2 {
        let req = Request::post("/decompositions")
            .header(header::CONTENT_TYPE, "application/json")
            .body(Body::from(json!({"cap": c0()}).to_string()))
            .unwrap();
        let resp = app.clone().oneshot(req).await.unwrap();
        bodies.push(resp.into_body().collect().await.unwrap().to_bytes());
    }
    assert_eq!(bodies[0], bodies[1]);
}

#[tokio::test]
async fn render_svg_and_ascii() {
    let (status, ctype, a) = call("POST", "/render", Some(json!({"points": c0(), "format": "svg"}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ctype, "image/svg+xml");
    let (_, _, b) = call("POST", "/render", Some(json!({"points": c0()}))).await;
    assert_eq!(a, b);
    let (_, ctype, text) = call("POST", "/render", Some(json!({"points": c0(), "format": "ascii"}))).await;
    assert!(ctype.starts_with("text/plain"));
    assert_eq!(String::from_utf8(text).unwrap().matches('#').count(), 20);

    let dec = decompositions(&canonical_cap())[0];
    let (_, part) = post_json("/partition", json!({"cap": c0(), "half_a": dec.half_a.points().indices(), "half_b": dec.half_b.points().indices()})).await;
    let (status, ctype, _) = call("POST", "/render", Some(json!({"partition": part["partition"]["blocks"]}))).await;
    assert_eq!((status, ctype.as_str()), (StatusCode::OK, "image/svg+xml"));

    let (status, _, _) = call("POST", "/render", Some(json!({"points": [0], "format": "png"}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn cors_headers_present() {
    let req = Request::get("/health").header(header::ORIGIN, "http://localhost:5173").body(Body::empty()).unwrap();
    let resp = router().oneshot(req).await.unwrap();
    assert!(resp.headers().contains_key(header::ACCESS_CONTROL_ALLOW_ORIGIN));
}
