use axum::body::{to_bytes, Body};
use axum::http::{header, Request, StatusCode};
use axum::Router;
use dominance::export::{BoundaryRecord, TRAJECTORY_COLUMNS};
use dominance::session::{SessionState, SessionStatus};
use dominance_service::{router, AppState, Created, ServerMessage, ServiceConfig};
use tower::ServiceExt;

fn scenario(name: &str) -> String {
    let path = format!("{}/../core/scenarios/{name}.toml", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

fn app() -> Router {
    router(AppState::new(ServiceConfig::default()))
}

async fn send(app: &Router, req: Request<Body>) -> (StatusCode, Vec<u8>) {
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    (status, to_bytes(resp.into_body(), 1 << 24).await.unwrap().to_vec())
}

fn post(body: String, content_type: &str) -> Request<Body> {
    Request::post("/sessions").header(header::CONTENT_TYPE, content_type).body(Body::from(body)).unwrap()
}

fn get(uri: &str) -> Request<Body> {
    Request::get(uri).body(Body::empty()).unwrap()
}

#[tokio::test]
async fn example5_session_has_three_typed_arcs() {
    let app = app();
    let (status, body) = send(&app, post(scenario("example5_live"), "application/toml")).await;
    assert_eq!(status, StatusCode::CREATED);
    let created: Created = serde_json::from_slice(&body).unwrap();
    assert_eq!(created.boundary_summary, ["oval", "apollonius", "oval"]);
    assert_eq!(created.state.status, SessionStatus::Running);

    let (status, body) = send(&app, get(&format!("/sessions/{}/boundary", created.id))).await;
    assert_eq!(status, StatusCode::OK);
    let record: BoundaryRecord = serde_json::from_slice(&body).unwrap();
    let kinds: Vec<&str> = record.arcs.iter().map(|a| a.kind.as_str()).collect();
    assert_eq!(kinds, ["oval", "apollonius", "oval"]);
    assert!(record.max_residual() < 1e-9);

    let (status, body) = send(&app, get(&format!("/sessions/{}/state", created.id))).await;
    assert_eq!(status, StatusCode::OK);
    let state: SessionState = serde_json::from_slice(&body).unwrap();
    assert_eq!(state.ticks, 0);
    assert_eq!(state.last_heading, None);
}

#[tokio::test]
async fn json_body_is_accepted() {
    let app = app();
    let sc = dominance::scenario::Scenario::from_toml_str(&scenario("free_live")).unwrap();
    let (status, body) = send(&app, post(serde_json::to_string(&sc).unwrap(), "application/json")).await;
    assert_eq!(status, StatusCode::CREATED, "{}", String::from_utf8_lossy(&body));
    let created: Created = serde_json::from_slice(&body).unwrap();
    assert_eq!(created.boundary_summary, ["apollonius"]);
}

#[tokio::test]
async fn invalid_scenario_is_rejected() {
    let app = app();
    let bad = scenario("free_live").replace("alpha = 2.0", "alpha = 0.5");
    let (status, body) = send(&app, post(bad, "application/toml")).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let msg: ServerMessage = serde_json::from_slice(&body).unwrap();
    assert!(matches!(msg, ServerMessage::Error { .. }));
}

#[tokio::test]
async fn unknown_session_is_404() {
    let app = app();
    for uri in ["/sessions/nope/state", "/sessions/nope/boundary", "/sessions/nope/trajectory"] {
        let (status, body) = send(&app, get(uri)).await;
        assert_eq!(status, StatusCode::NOT_FOUND);
        let msg: ServerMessage = serde_json::from_slice(&body).unwrap();
        assert_eq!(msg, ServerMessage::Error { message: "unknown session nope".into() });
    }
}

#[tokio::test]
async fn trajectory_dump_has_documented_columns() {
    let app = app();
    let (_, body) = send(&app, post(scenario("free_live"), "text/plain")).await;
    let created: Created = serde_json::from_slice(&body).unwrap();
    let (status, body) = send(&app, get(&format!("/sessions/{}/trajectory", created.id))).await;
    assert_eq!(status, StatusCode::OK);
    // no ticks yet: header only
    assert_eq!(String::from_utf8(body).unwrap().trim(), TRAJECTORY_COLUMNS.join(","));
}
