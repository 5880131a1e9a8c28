use std::net::SocketAddr;

use axum::body::{to_bytes, Body};
use axum::http::{header, Request};
use dominance::engine::flags;
use dominance::session::{replay, FrameMessage, HeadingUpdate, SessionStatus};
use dominance::Point2;
use dominance_service::{router, AppState, Created, ServerMessage, ServiceConfig};
use futures::{SinkExt, StreamExt};
use tokio_tungstenite::tungstenite::Message;
use tower::ServiceExt;

type Ws = tokio_tungstenite::WebSocketStream<tokio_tungstenite::MaybeTlsStream<tokio::net::TcpStream>>;

async fn start() -> (AppState, SocketAddr) {
    let state = AppState::new(ServiceConfig { tick_hz: 500.0 });
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let app = router(state.clone());
    tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });
    (state, addr)
}

async fn create(state: &AppState, name: &str) -> String {
    let path = format!("{}/../core/scenarios/{name}.toml", env!("CARGO_MANIFEST_DIR"));
    let req = Request::post("/sessions")
        .header(header::CONTENT_TYPE, "application/toml")
        .body(Body::from(std::fs::read_to_string(path).unwrap()))
        .unwrap();
    let resp = router(state.clone()).oneshot(req).await.unwrap();
    let created: Created = serde_json::from_slice(&to_bytes(resp.into_body(), 1 << 20).await.unwrap()).unwrap();
    created.id
}

async fn connect(addr: SocketAddr, id: &str) -> Ws {
    tokio_tungstenite::connect_async(format!("ws://{addr}/sessions/{id}/stream")).await.unwrap().0
}

/// Next server message, or `None` once the socket closes.
async fn next(ws: &mut Ws) -> Option<ServerMessage> {
    loop {
        match ws.next().await? {
            Ok(Message::Text(t)) => return Some(serde_json::from_str(&t).unwrap()),
            Ok(Message::Close(_)) | Err(_) => return None,
            Ok(_) => continue,
        }
    }
}

async fn next_frame(ws: &mut Ws) -> Option<FrameMessage> {
    loop {
        match next(ws).await? {
            ServerMessage::Frame(f) => return Some(f),
            ServerMessage::Error { message } => panic!("error frame: {message}"),
        }
    }
}

async fn heading(ws: &mut Ws, id: &str, h: Point2, ts: f64) {
    let msg = HeadingUpdate { session_id: id.into(), heading: h, client_ts: ts, cursor: Some(Point2::new(0.0, -3.0)) };
    ws.send(Message::Text(serde_json::to_string(&msg).unwrap().into())).await.unwrap();
}

async fn assert_replay_matches(state: &AppState, id: &str) {
    let handle = state.session(id).unwrap();
    let session = handle.session.lock().await;
    let (traj, _) = replay(session.config().clone(), session.inputs()).unwrap();
    assert_eq!(&traj, session.trajectory());
}

#[tokio::test]
async fn capture_ends_the_stream_and_replays_exactly() {
    let (state, addr) = start().await;
    let id = create(&state, "free_live").await;
    let mut ws = connect(addr, &id).await;
    let first = next_frame(&mut ws).await.unwrap();
    assert!(first.boundary.as_ref().is_some_and(|b| !b.is_empty()));
    // non-unit heading: normalized, with a warning on a later frame
    heading(&mut ws, &id, Point2::new(0.0, 3.0), 0.5).await;
    let mut frames = vec![first];
    while let Some(f) = next_frame(&mut ws).await {
        frames.push(f);
    }
    let last = frames.last().unwrap();
    assert_eq!(last.status, SessionStatus::Captured);
    assert!(last.t_f.unwrap() <= last.capture_bound + 0.02);
    assert!(frames.iter().any(|f| f.warnings.iter().any(|w| w.contains("normalized"))));
    assert!(frames.iter().any(|f| (f.u_e.norm() - 1.0).abs() < 1e-12));
    assert!(frames[1..].iter().all(|f| f.boundary.is_none()));
    // frame times step by exactly dt until the capture frame
    for (k, f) in frames[..frames.len() - 1].iter().enumerate() {
        assert_eq!(f.t, (k + 1) as f64 * 0.02);
        assert!(f.phi_cursor.is_none() || f.phi_cursor.unwrap().is_finite());
    }
    assert_replay_matches(&state, &id).await;
}

#[tokio::test]
async fn example5_hundred_headings_replay_bit_for_bit() {
    let (state, addr) = start().await;
    let id = create(&state, "example5_live").await;
    let mut ws = connect(addr, &id).await;
    let mut last_t = 0.0;
    for k in 0..100 {
        let f = next_frame(&mut ws).await.unwrap();
        assert!(f.t > last_t);
        last_t = f.t;
        let a = -1.2 - 0.004 * k as f64;
        heading(&mut ws, &id, Point2::new(a.cos(), a.sin()), k as f64).await;
    }
    drop(ws);
    assert_replay_matches(&state, &id).await;
    let st = state.session(&id).unwrap().session.lock().await.state();
    assert!(st.last_heading.is_some());
}

#[tokio::test]
async fn evader_holds_still_without_input() {
    let (state, addr) = start().await;
    let id = create(&state, "example5_live").await;
    let mut ws = connect(addr, &id).await;
    for _ in 0..20 {
        let f = next_frame(&mut ws).await.unwrap();
        assert_eq!(f.x_e, Point2::new(2.0, -1.0));
        assert_eq!(f.u_e, Point2::ORIGIN);
    }
}

#[tokio::test]
async fn heading_into_the_wedge_slides_and_is_flagged() {
    let (state, addr) = start().await;
    let id = create(&state, "example5_live").await;
    let mut ws = connect(addr, &id).await;
    next_frame(&mut ws).await.unwrap();
    heading(&mut ws, &id, Point2::new(0.0, 1.0), 0.0).await;
    let mut slid = None;
    for _ in 0..200 {
        let f = next_frame(&mut ws).await.unwrap();
        if f.flags & flags::EVADER_SLID != 0 {
            slid = Some(f);
            break;
        }
    }
    let f = slid.expect("evader reached the wedge edge");
    assert!(f.warnings.iter().any(|w| w.contains("obstacle")));
}

#[tokio::test]
async fn unknown_session_gets_error_frame() {
    let (_state, addr) = start().await;
    let mut ws = connect(addr, "missing").await;
    assert_eq!(next(&mut ws).await, Some(ServerMessage::Error { message: "unknown session missing".into() }));
    assert_eq!(next(&mut ws).await, None);
}

#[tokio::test]
async fn second_stream_is_refused() {
    let (state, addr) = start().await;
    let id = create(&state, "example5_live").await;
    let mut a = connect(addr, &id).await;
    next_frame(&mut a).await.unwrap();
    let mut b = connect(addr, &id).await;
    assert!(matches!(next(&mut b).await, Some(ServerMessage::Error { .. })));
}

#[tokio::test]
async fn bad_heading_message_gets_error_reply() {
    let (state, addr) = start().await;
    let id = create(&state, "example5_live").await;
    let mut ws = connect(addr, &id).await;
    ws.send(Message::Text("{\"heading\": 3}".into())).await.unwrap();
    let mut saw_error = false;
    for _ in 0..50 {
        if let Some(ServerMessage::Error { message }) = next(&mut ws).await {
            assert!(message.contains("bad heading update"));
            saw_error = true;
            break;
        }
    }
    assert!(saw_error);
}
