//! The executor: one thread owns the [`Workbench`] and processes commands
//! from every connection in arrival order.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use tokio::sync::{mpsc, oneshot};

use crate::protocol::{decode_line, ServerMessage};
use crate::workbench::{ConnId, Workbench};

enum Command {
    Connect {
        conn: ConnId,
        tx: mpsc::UnboundedSender<String>,
    },
    Line {
        conn: ConnId,
        line: String,
    },
    Disconnect {
        conn: ConnId,
    },
    Snapshot {
        reply: oneshot::Sender<String>,
    },
    Stats {
        reply: oneshot::Sender<Stats>,
    },
}

/// Counters exposed for monitoring and tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stats {
    pub epoch: u64,
    pub subscribers: usize,
    pub profile_computations: u64,
}

/// Cloneable handle to the executor.
#[derive(Clone)]
pub struct Hub {
    tx: mpsc::UnboundedSender<Command>,
    next_conn: Arc<AtomicU64>,
}

impl Hub {
    /// Starts the executor thread. It stops once every handle is dropped.
    pub fn spawn(workbench: Workbench) -> Hub {
        let (tx, rx) = mpsc::unbounded_channel();
        std::thread::Builder::new()
            .name("liveprof-executor".into())
            .spawn(move || run(workbench, rx))
            .expect("spawn executor thread");
        Hub {
            tx,
            next_conn: Arc::new(AtomicU64::new(1)),
        }
    }

    /// Registers a new connection. Outgoing messages arrive on the returned
    /// client's receiver as JSON objects without trailing newlines.
    pub fn connect(&self) -> Client {
        let conn = self.next_conn.fetch_add(1, Ordering::Relaxed);
        let (tx, rx) = mpsc::unbounded_channel();
        let _ = self.tx.send(Command::Connect { conn, tx });
        Client {
            input: ClientSender {
                conn,
                hub: self.clone(),
            },
            rx,
        }
    }

    /// The current snapshot as a JSON line.
    pub async fn snapshot_json(&self) -> String {
        let (reply, rx) = oneshot::channel();
        let _ = self.tx.send(Command::Snapshot { reply });
        rx.await.unwrap_or_default()
    }

    pub async fn stats(&self) -> Stats {
        let (reply, rx) = oneshot::channel();
        let _ = self.tx.send(Command::Stats { reply });
        rx.await.expect("executor running")
    }
}

/// One connection's view of the hub. Dropping it disconnects.
pub struct Client {
    input: ClientSender,
    rx: mpsc::UnboundedReceiver<String>,
}

impl Client {
    pub fn id(&self) -> ConnId {
        self.input.conn
    }

    /// Queues one line of client input.
    pub fn send(&self, line: impl Into<String>) {
        self.input.send(line);
    }

    pub async fn recv(&mut self) -> Option<String> {
        self.rx.recv().await
    }

    /// Splits into the input half and the outgoing message stream.
    pub fn split(self) -> (ClientSender, mpsc::UnboundedReceiver<String>) {
        (self.input, self.rx)
    }
}

/// Input half of a [`Client`]; disconnects when dropped.
pub struct ClientSender {
    conn: ConnId,
    hub: Hub,
}

impl ClientSender {
    pub fn send(&self, line: impl Into<String>) {
        let _ = self.hub.tx.send(Command::Line {
            conn: self.conn,
            line: line.into(),
        });
    }
}

impl Drop for ClientSender {
    fn drop(&mut self) {
        let _ = self.hub.tx.send(Command::Disconnect { conn: self.conn });
    }
}

fn run(mut wb: Workbench, mut rx: mpsc::UnboundedReceiver<Command>) {
    let mut conns: HashMap<ConnId, mpsc::UnboundedSender<String>> = HashMap::new();
    while let Some(cmd) = rx.blocking_recv() {
        match cmd {
            Command::Connect { conn, tx } => {
                conns.insert(conn, tx);
            }
            Command::Disconnect { conn } => {
                if conns.remove(&conn).is_some() {
                    wb.disconnect(conn);
                }
            }
            Command::Snapshot { reply } => {
                let _ = reply.send(wb.snapshot().to_json_line());
            }
            Command::Stats { reply } => {
                let _ = reply.send(Stats {
                    epoch: wb.session().epoch(),
                    subscribers: wb.subscriber_count(),
                    profile_computations: wb.profile_computations(),
                });
            }
            Command::Line { conn, line } => {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let outcome = match decode_line(line) {
                    Ok(msg) => {
                        tracing::debug!(conn, ?msg, "request");
                        wb.handle(conn, msg)
                    }
                    Err(e) => crate::workbench::Outcome {
                        reply: vec![e],
                        broadcast: Vec::new(),
                    },
                };
                deliver(&mut wb, &mut conns, conn, &outcome.reply);
                let lines: Vec<String> = outcome.broadcast.iter().map(ServerMessage::to_json).collect();
                let targets: Vec<ConnId> = conns
                    .keys()
                    .copied()
                    .filter(|c| wb.is_subscribed(*c))
                    .collect();
                for target in targets {
                    for l in &lines {
                        if !send(&mut wb, &mut conns, target, l.clone()) {
                            break;
                        }
                    }
                }
            }
        }
    }
}

fn deliver(
    wb: &mut Workbench,
    conns: &mut HashMap<ConnId, mpsc::UnboundedSender<String>>,
    conn: ConnId,
    msgs: &[ServerMessage],
) {
    for m in msgs {
        if !send(wb, conns, conn, m.to_json()) {
            return;
        }
    }
}

/// Sends one line; a closed receiver counts as a disconnect.
fn send(
    wb: &mut Workbench,
    conns: &mut HashMap<ConnId, mpsc::UnboundedSender<String>>,
    conn: ConnId,
    line: String,
) -> bool {
    let Some(tx) = conns.get(&conn) else {
        return false;
    };
    if tx.send(line).is_err() {
        conns.remove(&conn);
        wb.disconnect(conn);
        return false;
    }
    true
}
