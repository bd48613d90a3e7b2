use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use gr1_cli::commands::{refine, RefineArgs};
use gr1_cli::server::{router, AppState};
use gr1_core::arena::DEFAULT_STATE_LIMIT;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn spec_text(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../specs/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn app() -> Router {
    router(Arc::new(AppState::new(DEFAULT_STATE_LIMIT)))
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req.header("content-type", "application/json").body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

async fn create(app: &Router, name: &str) -> String {
    let (status, v) = call(app, "POST", "/api/session", Some(json!({ "spec_text": spec_text(name) }))).await;
    assert_eq!(status, StatusCode::OK);
    v["id"].as_str().unwrap().to_string()
}

fn formulas(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|c| c["formula"].as_str().unwrap().to_string()).collect()
}

/// Applies `GF(!r)` to a fresh request/grant session and lists candidates
/// for the subsets r / c / r,c / c.
async fn request_grant_walk(app: &Router) -> (String, Value) {
    let id = create(app, "request_grant.spec").await;
    let (_, cands) = call(app, "GET", &format!("/api/session/{id}/candidates?p1=r"), None).await;
    let index = formulas(&cands).iter().position(|f| f == "GF(!r)").unwrap();
    let (status, applied) =
        call(app, "POST", &format!("/api/session/{id}/apply"), Some(json!({ "candidate_index": index }))).await;
    assert_eq!(status, StatusCode::OK);
    let (_, cands) = call(app, "GET", &format!("/api/session/{id}/candidates?p1=r&p2=c&p3=r,c&p4=c"), None).await;
    (id, json!({ "applied": applied, "candidates": cands }))
}

#[tokio::test]
async fn request_grant_session() {
    let app = app();
    let (status, v) = call(&app, "POST", "/api/session", Some(json!({ "spec_text": spec_text("request_grant.spec") }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["realizable"], false);
    let states = v["counterstrategy"]["states"].as_array().unwrap();
    assert!(states.iter().all(|s| s["predicate"] == "r & c"));
    assert!(v["counterstrategy"]["edges"].as_array().unwrap().iter().all(|e| e.as_array().unwrap().len() == 2));

    let (id, walk) = request_grant_walk(&app).await;
    assert_eq!(walk["applied"]["node_id"], 1);
    assert_eq!(walk["applied"]["realizable"], false);
    assert_eq!(walk["applied"]["consistent"], true);
    assert!(walk["applied"]["counterstrategy"].is_object());
    let mut got = formulas(&walk["candidates"]);
    got.sort();
    let mut want = vec!["GF(FALSE)", "G(!c)", "G((r & c) -> X(!c))", "G((!r & c) -> X(!c))"];
    want.sort();
    assert_eq!(got, want);
    let gf_false = walk["candidates"].as_array().unwrap().iter().find(|c| c["formula"] == "GF(FALSE)").unwrap();
    assert_eq!(gf_false["consistent"], false);

    let (status, v) = call(&app, "POST", &format!("/api/session/{id}/back"), Some(json!({ "node_id": 0 }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["id"], 0);
    let (_, tree) = call(&app, "GET", &format!("/api/session/{id}/tree"), None).await;
    assert_eq!(tree["current"], 0);
    assert_eq!(tree["nodes"].as_array().unwrap().len(), 2);
    assert_eq!(tree["nodes"][1]["conjuncts"], json!(["GF(!r)"]));
}

#[tokio::test]
async fn error_statuses() {
    let app = app();
    let (status, v) = call(&app, "POST", "/api/session", Some(json!({ "spec_text": "ENV_VARS: a\nSYS_VARS: a\n" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(v["error"].as_str().unwrap().contains("more than once"));
    let (status, _) = call(&app, "GET", "/api/session/99/tree", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let lift = create(&app, "lift.spec").await;
    let (status, _) = call(&app, "POST", &format!("/api/session/{lift}/apply"), Some(json!({ "candidate_index": 0 }))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, _) = call(&app, "GET", &format!("/api/session/{lift}/candidates"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);

    let rg = create(&app, "request_grant.spec").await;
    let (status, _) = call(&app, "POST", &format!("/api/session/{rg}/back"), Some(json!({ "node_id": 5 }))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, "GET", &format!("/api/session/{rg}/candidates?p1=g"), None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, "POST", &format!("/api/session/{rg}/apply"), Some(json!({ "candidate_index": 40 }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, "POST", &format!("/api/session/{rg}/auto"), Some(json!({ "alpha": 0 }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn identical_requests_give_identical_trees() {
    let mut trees = Vec::new();
    for _ in 0..2 {
        let app = app();
        let (id, _) = request_grant_walk(&app).await;
        call(&app, "POST", &format!("/api/session/{id}/apply"), Some(json!({ "candidate_index": 1 }))).await;
        let (_, tree) = call(&app, "GET", &format!("/api/session/{id}/tree"), None).await;
        trees.push(tree.to_string());
    }
    assert_eq!(trees[0], trees[1]);
}

fn without_times(mut v: Value) -> Value {
    v["total_time_ms"] = json!(0);
    v["candidate_time_ms"] = json!(0);
    for n in v["nodes"].as_array_mut().unwrap() {
        n["wall_time_ms"] = json!(0);
    }
    v
}

#[tokio::test]
async fn auto_matches_the_refine_command() {
    let app = app();
    let id = create(&app, "lift_all_floors.spec").await;
    let (status, report) = call(&app, "POST", &format!("/api/session/{id}/auto"), Some(json!({ "alpha": 2 }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(report["refinements"].as_array().unwrap().len(), 2);

    let spec = std::path::PathBuf::from(format!("{}/../../specs/lift_all_floors.spec", env!("CARGO_MANIFEST_DIR")));
    let args = RefineArgs {
        spec: &spec,
        alpha: 2,
        beta: None,
        p: [None; 4],
        all: true,
        json: true,
        state_limit: DEFAULT_STATE_LIMIT,
    };
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(refine(&args, &mut out, &mut err), 0);
    let cli: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(without_times(cli), without_times(report));
}

#[tokio::test]
async fn sessions_survive_a_restart() {
    let dir = tempfile::tempdir().unwrap();
    let before = {
        let app = router(Arc::new(AppState::with_persistence(DEFAULT_STATE_LIMIT, dir.path()).unwrap()));
        let (id, _) = request_grant_walk(&app).await;
        call(&app, "GET", &format!("/api/session/{id}/tree"), None).await.1
    };
    let app = router(Arc::new(AppState::with_persistence(DEFAULT_STATE_LIMIT, dir.path()).unwrap()));
    let (status, after) = call(&app, "GET", "/api/session/1/tree", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(after, before);
    assert_eq!(create(&app, "lift.spec").await, "2");
}
