//! Line-delimited JSON messages exchanged with clients.
//!
//! Every client message carries an `id` chosen by the client; replies echo
//! it. Broadcasts (`profiles`, `removed`, `order`) carry no id.

use liveprof_core::export::ExportRequest;
use liveprof_core::session::{ExecError, PlotRequest};
use liveprof_core::TableProfile;
use serde::{Deserialize, Serialize};

use crate::ordering::OrderMode;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClientMessage {
    Exec { id: u64, source: String },
    Subscribe { id: u64 },
    Unsubscribe { id: u64 },
    Export { id: u64, request: ExportRequest },
    Pin { id: u64, table: String, pinned: bool },
    Reset { id: u64 },
    Sort { id: u64, mode: OrderMode },
}

impl ClientMessage {
    pub fn id(&self) -> u64 {
        match self {
            ClientMessage::Exec { id, .. }
            | ClientMessage::Subscribe { id }
            | ClientMessage::Unsubscribe { id }
            | ClientMessage::Export { id, .. }
            | ClientMessage::Pin { id, .. }
            | ClientMessage::Reset { id }
            | ClientMessage::Sort { id, .. } => *id,
        }
    }
}

/// The profile payload shared by live `profiles` messages, `GET /snapshot`
/// and `report --format json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub epoch: u64,
    /// Every live table name in display order.
    pub order: Vec<String>,
    /// Profiles in display order. Incremental updates hold only the tables
    /// that changed.
    pub profiles: Vec<TableProfile>,
}

impl Snapshot {
    /// Canonical JSON followed by a newline.
    pub fn to_json_line(&self) -> String {
        let mut s = serde_json::to_string(self).expect("snapshot serialises");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    ExecResult {
        id: u64,
        epoch: u64,
        ok: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        error: Option<ExecError>,
        changed: Vec<String>,
        removed: Vec<String>,
        plots: Vec<PlotRequest>,
    },
    Profiles(Snapshot),
    Removed {
        epoch: u64,
        names: Vec<String>,
    },
    Order {
        mode: OrderMode,
        pinned: Vec<String>,
        order: Vec<String>,
    },
    Snippet {
        id: u64,
        text: String,
        new_name: Option<String>,
    },
    Ack {
        id: u64,
    },
    Error {
        /// Absent when the offending line could not be decoded.
        id: Option<u64>,
        kind: String,
        message: String,
    },
}

impl ServerMessage {
    /// One JSON object, without the trailing newline.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("message serialises")
    }
}

/// Decodes one line. Malformed input becomes an `error` reply.
#[allow(clippy::result_large_err)]
pub fn decode_line(line: &str) -> Result<ClientMessage, ServerMessage> {
    serde_json::from_str(line).map_err(|e| {
        let id = serde_json::from_str::<serde_json::Value>(line)
            .ok()
            .and_then(|v| v.get("id").and_then(serde_json::Value::as_u64));
        ServerMessage::Error {
            id,
            kind: "ProtocolError".into(),
            message: e.to_string(),
        }
    })
}
