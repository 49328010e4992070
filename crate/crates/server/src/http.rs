//! HTTP front end: WebSocket protocol endpoint, snapshot endpoint and the
//! static UI.

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::http::header;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use futures::{SinkExt, StreamExt};

use crate::hub::Hub;

const INDEX_HTML: &str = include_str!("../assets/index.html");
const APP_JS: &str = include_str!("../assets/app.js");
const STYLE_CSS: &str = include_str!("../assets/style.css");

/// Routes: `/` and its assets, `GET /snapshot`, and `/ws`.
pub fn router(hub: Hub) -> Router {
    Router::new()
        .route("/", get(|| async { Html(INDEX_HTML) }))
        .route("/app.js", get(|| async { asset("text/javascript", APP_JS) }))
        .route("/style.css", get(|| async { asset("text/css", STYLE_CSS) }))
        .route("/snapshot", get(snapshot))
        .route("/ws", get(ws))
        .with_state(hub)
}

fn asset(content_type: &'static str, body: &'static str) -> Response {
    ([(header::CONTENT_TYPE, content_type)], body).into_response()
}

async fn snapshot(State(hub): State<Hub>) -> Response {
    (
        [(header::CONTENT_TYPE, "application/json")],
        hub.snapshot_json().await,
    )
        .into_response()
}

async fn ws(upgrade: WebSocketUpgrade, State(hub): State<Hub>) -> Response {
    upgrade.on_upgrade(move |socket| handle_socket(socket, hub))
}

/// Each text frame holds one or more newline-separated messages; each
/// outgoing message is sent as its own frame.
async fn handle_socket(socket: WebSocket, hub: Hub) {
    let (input, mut output) = hub.connect().split();
    let (mut sink, mut stream) = socket.split();
    let writer = tokio::spawn(async move {
        while let Some(line) = output.recv().await {
            if sink.send(Message::Text(line.into())).await.is_err() {
                break;
            }
        }
    });
    while let Some(Ok(msg)) = stream.next().await {
        match msg {
            Message::Text(text) => {
                for line in text.lines() {
                    input.send(line);
                }
            }
            Message::Close(_) => break,
            _ => {}
        }
    }
    drop(input);
    writer.abort();
}
