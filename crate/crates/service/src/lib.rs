//! HTTP and WebSocket front end for live sessions.
//!
//! Routes:
//!
//! - `POST /sessions` with a scenario (TOML, or JSON when the content type
//!   says so) creates a session and returns its id and initial state.
//! - `GET /sessions/{id}/state` returns a state snapshot.
//! - `GET /sessions/{id}/boundary` returns the typed boundary record.
//! - `GET /sessions/{id}/trajectory` returns the trajectory so far as CSV.
//! - `GET /sessions/{id}/stream` upgrades to a WebSocket. The server ticks
//!   the session at a fixed wall-clock rate, one `dt` per tick, and sends a
//!   [`ServerMessage`] per tick. The client sends [`HeadingUpdate`]s as JSON
//!   text messages. The socket closes after the final frame.
//!
//! The stream task is the only writer of a session. Other requests take
//! short snapshots under the same lock.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{Path, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use dominance::export::write_trajectory_csv;
use dominance::scenario::Scenario;
use dominance::session::{FrameMessage, HeadingUpdate, Session, SessionState};
use futures::{SinkExt, StreamExt};
use serde::{Deserialize, Serialize};
use tokio::sync::Mutex;

pub const DEFAULT_TICK_HZ: f64 = 50.0;
pub const DEFAULT_BIND: &str = "127.0.0.1:8080";

/// Server-to-client stream message.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    Frame(FrameMessage),
    Error { message: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Created {
    pub id: String,
    pub state: SessionState,
    pub boundary_summary: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct ServiceConfig {
    pub tick_hz: f64,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self { tick_hz: DEFAULT_TICK_HZ }
    }
}

pub struct SessionHandle {
    pub session: Mutex<Session>,
    streaming: AtomicBool,
}

#[derive(Clone)]
pub struct AppState {
    sessions: Arc<std::sync::Mutex<HashMap<String, Arc<SessionHandle>>>>,
    next_id: Arc<AtomicU64>,
    config: ServiceConfig,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> Self {
        Self { sessions: Default::default(), next_id: Arc::new(AtomicU64::new(1)), config }
    }

    pub fn session(&self, id: &str) -> Option<Arc<SessionHandle>> {
        self.sessions.lock().expect("session map poisoned").get(id).cloned()
    }

    fn insert(&self, session: Session) {
        let id = session.id().to_string();
        let handle = Arc::new(SessionHandle { session: Mutex::new(session), streaming: AtomicBool::new(false) });
        self.sessions.lock().expect("session map poisoned").insert(id, handle);
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}/state", get(get_state))
        .route("/sessions/{id}/boundary", get(get_boundary))
        .route("/sessions/{id}/trajectory", get(get_trajectory))
        .route("/sessions/{id}/stream", get(stream))
        .with_state(state)
}

/// Binds and serves until the process is stopped.
pub async fn serve(bind: &str, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(bind).await?;
    axum::serve(listener, router(AppState::new(config))).await
}

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(ServerMessage::Error { message: message.into() })).into_response()
}

fn unknown(id: &str) -> Response {
    error(StatusCode::NOT_FOUND, format!("unknown session {id}"))
}

async fn create_session(State(app): State<AppState>, headers: HeaderMap, body: Bytes) -> Response {
    let Ok(text) = std::str::from_utf8(&body) else {
        return error(StatusCode::BAD_REQUEST, "body is not UTF-8");
    };
    let json = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("application/json"));
    let parsed = if json { Scenario::from_json_str(text) } else { Scenario::from_toml_str(text) };
    let session = parsed.and_then(|s| s.sim_config()).and_then(|cfg| {
        let id = format!("s{}", app.next_id.fetch_add(1, Ordering::Relaxed));
        Session::new(id, cfg)
    });
    match session {
        Ok(s) => {
            let created =
                Created { id: s.id().to_string(), state: s.state(), boundary_summary: s.boundary().summary.clone() };
            app.insert(s);
            (StatusCode::CREATED, Json(created)).into_response()
        }
        Err(e) => error(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()),
    }
}

async fn get_state(State(app): State<AppState>, Path(id): Path<String>) -> Response {
    match app.session(&id) {
        Some(h) => Json(h.session.lock().await.state()).into_response(),
        None => unknown(&id),
    }
}

async fn get_boundary(State(app): State<AppState>, Path(id): Path<String>) -> Response {
    match app.session(&id) {
        Some(h) => Json(h.session.lock().await.boundary().clone()).into_response(),
        None => unknown(&id),
    }
}

async fn get_trajectory(State(app): State<AppState>, Path(id): Path<String>) -> Response {
    let Some(h) = app.session(&id) else { return unknown(&id) };
    let mut buf = Vec::new();
    if let Err(e) = write_trajectory_csv(h.session.lock().await.trajectory(), &mut buf) {
        return error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string());
    }
    ([(header::CONTENT_TYPE, "text/csv")], buf).into_response()
}

async fn stream(State(app): State<AppState>, Path(id): Path<String>, ws: WebSocketUpgrade) -> Response {
    let handle = app.session(&id);
    let period = Duration::from_secs_f64(1.0 / app.config.tick_hz);
    ws.on_upgrade(move |socket| async move {
        match handle {
            Some(h) => run_stream(socket, h, period).await,
            None => {
                let _ = send_then_close(socket, ServerMessage::Error { message: format!("unknown session {id}") }).await;
            }
        }
    })
}

fn encode(msg: &ServerMessage) -> Message {
    Message::Text(serde_json::to_string(msg).expect("messages serialize").into())
}

async fn send_then_close(mut socket: WebSocket, msg: ServerMessage) -> Result<(), axum::Error> {
    socket.send(encode(&msg)).await?;
    socket.send(Message::Close(None)).await
}

async fn run_stream(socket: WebSocket, handle: Arc<SessionHandle>, period: Duration) {
    if handle.streaming.swap(true, Ordering::AcqRel) {
        let _ = send_then_close(socket, ServerMessage::Error { message: "session already has a stream".into() }).await;
        return;
    }
    pump(socket, &handle, period).await;
    // a dropped client may reconnect and resume the same session
    handle.streaming.store(false, Ordering::Release);
}

async fn pump(socket: WebSocket, handle: &SessionHandle, period: Duration) {
    let (mut tx, mut rx) = socket.split();
    let mut ticker = tokio::time::interval(period);
    ticker.set_missed_tick_behavior(tokio::time::MissedTickBehavior::Delay);
    loop {
        tokio::select! {
            _ = ticker.tick() => {
                let frame = handle.session.lock().await.tick();
                let Some(frame) = frame else { break };
                let last = frame.status != dominance::session::SessionStatus::Running;
                if tx.send(encode(&ServerMessage::Frame(frame))).await.is_err() {
                    return;
                }
                if last {
                    break;
                }
            }
            incoming = rx.next() => {
                let reply = match incoming {
                    Some(Ok(Message::Text(text))) => apply_heading(handle, &text).await,
                    Some(Ok(Message::Close(_))) | None | Some(Err(_)) => return,
                    Some(Ok(_)) => None,
                };
                if let Some(msg) = reply {
                    if tx.send(encode(&msg)).await.is_err() {
                        return;
                    }
                }
            }
        }
    }
    let _ = tx.send(Message::Close(None)).await;
}

async fn apply_heading(handle: &SessionHandle, text: &str) -> Option<ServerMessage> {
    let update: HeadingUpdate = match serde_json::from_str(text) {
        Ok(u) => u,
        Err(e) => return Some(ServerMessage::Error { message: format!("bad heading update: {e}") }),
    };
    let result = handle.session.lock().await.set_heading(&update);
    result.err().map(|e| ServerMessage::Error { message: e.to_string() })
}
