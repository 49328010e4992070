//! Live synchronisation between a workbench session and its clients.
//!
//! Clients send line-delimited JSON requests over a WebSocket (`/ws`) or a
//! raw TCP socket. A single executor runs them in arrival order and pushes
//! profile updates to subscribed clients; with no subscriber attached no
//! profiles are computed at all.

pub mod http;
pub mod hub;
pub mod ordering;
pub mod protocol;
pub mod tcp;
pub mod workbench;

pub use http::router;
pub use hub::{Client, Hub, Stats};
pub use ordering::{OrderEntry, OrderMode, OrderingPolicy};
pub use protocol::{decode_line, ClientMessage, ServerMessage, Snapshot};
pub use tcp::serve_tcp;
pub use workbench::{ConnId, Outcome, Workbench};
