//! The session owner behind the server: executes requests, keeps profiles
//! current for subscribers and decides what to broadcast. No I/O happens
//! here; transports feed it messages one at a time.

use std::collections::{BTreeMap, BTreeSet};

use liveprof_core::export::export;
use liveprof_core::session::LiveTable;
use liveprof_core::{profile_table, Session, TableProfile};

use crate::ordering::{OrderEntry, OrderMode, OrderingPolicy};
use crate::protocol::{ClientMessage, ServerMessage, Snapshot};

/// Identifies one client connection.
pub type ConnId = u64;

/// Messages produced by one request: `reply` goes to the requesting
/// connection, `broadcast` to every subscriber, in order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub reply: Vec<ServerMessage>,
    pub broadcast: Vec<ServerMessage>,
}

#[derive(Debug)]
pub struct Workbench {
    session: Session,
    subscribers: BTreeSet<ConnId>,
    cache: BTreeMap<String, TableProfile>,
    /// Tables changed while nobody was subscribed.
    dirty: BTreeSet<String>,
    mode: OrderMode,
    profile_computations: u64,
}

impl Workbench {
    pub fn new(session: Session) -> Self {
        Workbench {
            session,
            subscribers: BTreeSet::new(),
            cache: BTreeMap::new(),
            dirty: BTreeSet::new(),
            mode: OrderMode::default(),
            profile_computations: 0,
        }
    }

    pub fn session(&self) -> &Session {
        &self.session
    }

    /// Number of table profiles computed so far.
    pub fn profile_computations(&self) -> u64 {
        self.profile_computations
    }

    pub fn subscriber_count(&self) -> usize {
        self.subscribers.len()
    }

    pub fn is_subscribed(&self, conn: ConnId) -> bool {
        self.subscribers.contains(&conn)
    }

    pub fn policy(&self) -> OrderingPolicy {
        OrderingPolicy {
            mode: self.mode,
            pinned: self.session.pinned().clone(),
        }
    }

    fn order(&self, tables: &[LiveTable]) -> Vec<String> {
        self.policy().order(
            tables
                .iter()
                .map(|t| OrderEntry {
                    name: t.name.clone(),
                    last_epoch: t.last_epoch,
                })
                .collect(),
        )
    }

    fn compute(&mut self, live: &LiveTable) -> TableProfile {
        self.profile_computations += 1;
        let mut p = profile_table(&live.table);
        p.table_name = live.name.clone();
        p.epoch = live.last_epoch;
        p.temporary = live.temporary;
        self.cache.insert(live.name.clone(), p.clone());
        p
    }

    /// Recomputes every profile that is dirty or missing, and forgets
    /// profiles of tables that no longer exist.
    fn refresh(&mut self) {
        let live = self.session.live_tables();
        let names: BTreeSet<&str> = live.iter().map(|t| t.name.as_str()).collect();
        self.cache.retain(|n, _| names.contains(n.as_str()));
        for t in &live {
            let stale = self.dirty.contains(&t.name)
                || self
                    .cache
                    .get(&t.name)
                    .is_none_or(|p| p.fingerprint != t.fingerprint || p.epoch != t.last_epoch);
            if stale {
                self.compute(t);
            }
        }
        self.dirty.clear();
    }

    /// Every live profile in display order, recomputing stale ones first.
    pub fn snapshot(&mut self) -> Snapshot {
        self.refresh();
        let live = self.session.live_tables();
        let order = self.order(&live);
        let profiles = order.iter().map(|n| self.cache[n].clone()).collect();
        Snapshot {
            epoch: self.session.epoch(),
            order,
            profiles,
        }
    }

    fn order_message(&self) -> ServerMessage {
        ServerMessage::Order {
            mode: self.mode,
            pinned: self.session.pinned().iter().cloned().collect(),
            order: self.order(&self.session.live_tables()),
        }
    }

    pub fn disconnect(&mut self, conn: ConnId) {
        self.subscribers.remove(&conn);
    }

    pub fn handle(&mut self, conn: ConnId, msg: ClientMessage) -> Outcome {
        match msg {
            ClientMessage::Exec { id, source } => self.exec(id, &source),
            ClientMessage::Subscribe { .. } => {
                self.subscribers.insert(conn);
                Outcome {
                    reply: vec![ServerMessage::Profiles(self.snapshot())],
                    broadcast: Vec::new(),
                }
            }
            ClientMessage::Unsubscribe { id } => {
                self.subscribers.remove(&conn);
                reply(ServerMessage::Ack { id })
            }
            ClientMessage::Export { id, request } => match export(&self.session, &request) {
                Ok(s) => reply(ServerMessage::Snippet {
                    id,
                    text: s.text,
                    new_name: s.new_name,
                }),
                Err(e) => reply(ServerMessage::Error {
                    id: Some(id),
                    kind: e.kind().into(),
                    message: e.to_string(),
                }),
            },
            ClientMessage::Pin { id, table, pinned } => {
                let result = if pinned {
                    self.session.pin(&table)
                } else {
                    self.session.unpin(&table);
                    Ok(())
                };
                match result {
                    Ok(()) => self.ack_with_order(id),
                    Err(e) => reply(ServerMessage::Error {
                        id: Some(id),
                        kind: e.kind.to_string(),
                        message: e.message,
                    }),
                }
            }
            ClientMessage::Sort { id, mode } => {
                self.mode = mode;
                self.ack_with_order(id)
            }
            ClientMessage::Reset { id } => {
                let names = self.session.reset();
                self.cache.clear();
                self.dirty.clear();
                let epoch = self.session.epoch();
                Outcome {
                    reply: vec![ServerMessage::Ack { id }],
                    broadcast: self.for_subscribers(vec![
                        ServerMessage::Removed { epoch, names },
                        ServerMessage::Profiles(Snapshot {
                            epoch,
                            order: Vec::new(),
                            profiles: Vec::new(),
                        }),
                    ]),
                }
            }
        }
    }

    fn for_subscribers(&self, msgs: Vec<ServerMessage>) -> Vec<ServerMessage> {
        if self.subscribers.is_empty() {
            Vec::new()
        } else {
            msgs
        }
    }

    fn ack_with_order(&self, id: u64) -> Outcome {
        Outcome {
            reply: vec![ServerMessage::Ack { id }],
            broadcast: self.for_subscribers(vec![self.order_message()]),
        }
    }

    fn exec(&mut self, id: u64, source: &str) -> Outcome {
        let r = self.session.execute(source);
        for name in &r.removed {
            self.cache.remove(name);
            self.dirty.remove(name);
        }
        let mut broadcast = Vec::new();
        if self.subscribers.is_empty() {
            self.dirty.extend(r.changed.iter().cloned());
        } else {
            if !r.removed.is_empty() {
                broadcast.push(ServerMessage::Removed {
                    epoch: r.epoch,
                    names: r.removed.clone(),
                });
            }
            let live = self.session.live_tables();
            let order = self.order(&live);
            let changed: BTreeSet<&str> = r.changed.iter().map(String::as_str).collect();
            let mut profiles = Vec::with_capacity(changed.len());
            for name in &order {
                if changed.contains(name.as_str()) {
                    let t = live.iter().find(|t| &t.name == name).expect("live table");
                    profiles.push(self.compute(t));
                }
            }
            broadcast.push(ServerMessage::Profiles(Snapshot {
                epoch: r.epoch,
                order,
                profiles,
            }));
        }
        Outcome {
            reply: vec![ServerMessage::ExecResult {
                id,
                epoch: r.epoch,
                ok: r.ok,
                error: r.error,
                changed: r.changed,
                removed: r.removed,
                plots: r.plots,
            }],
            broadcast,
        }
    }
}

fn reply(msg: ServerMessage) -> Outcome {
    Outcome {
        reply: vec![msg],
        broadcast: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bench() -> (tempfile::TempDir, Workbench) {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("a.csv"), "v,w\n1,x\n2,y\n2,y\n").unwrap();
        let wb = Workbench::new(Session::new().with_base_dir(dir.path()));
        (dir, wb)
    }

    fn exec(wb: &mut Workbench, src: &str) -> Outcome {
        wb.handle(
            1,
            ClientMessage::Exec {
                id: 1,
                source: src.into(),
            },
        )
    }

    #[test]
    fn no_subscriber_means_no_profiling() {
        let (_d, mut wb) = bench();
        let out = exec(&mut wb, "load \"a.csv\" as a\nb = dedupe a");
        assert!(out.broadcast.is_empty());
        assert_eq!(wb.profile_computations(), 0);
        let out = wb.handle(7, ClientMessage::Subscribe { id: 2 });
        assert_eq!(wb.profile_computations(), 2);
        let ServerMessage::Profiles(s) = &out.reply[0] else {
            panic!()
        };
        assert_eq!(s.order, ["a", "b"]);
    }

    #[test]
    fn subscriber_gets_changed_tables_only() {
        let (_d, mut wb) = bench();
        wb.handle(7, ClientMessage::Subscribe { id: 1 });
        exec(&mut wb, "load \"a.csv\" as a");
        let out = exec(&mut wb, "b = a\nb = dedupe b\na = a");
        let [ServerMessage::Profiles(s)] = out.broadcast.as_slice() else {
            panic!("{:?}", out.broadcast)
        };
        assert_eq!(s.order, ["b", "a"]);
        assert_eq!(s.profiles.len(), 1);
        assert_eq!(s.profiles[0].table_name, "b");
        assert_eq!(wb.profile_computations(), 2);
    }

    #[test]
    fn pin_reorders_and_unknown_pin_errors() {
        let (_d, mut wb) = bench();
        wb.handle(7, ClientMessage::Subscribe { id: 1 });
        exec(&mut wb, "load \"a.csv\" as a\nload \"a.csv\" as b");
        exec(&mut wb, "b = head b 1");
        let out = wb.handle(
            7,
            ClientMessage::Pin {
                id: 3,
                table: "a".into(),
                pinned: true,
            },
        );
        assert_eq!(out.reply, vec![ServerMessage::Ack { id: 3 }]);
        let ServerMessage::Order { order, .. } = &out.broadcast[0] else {
            panic!()
        };
        assert_eq!(order, &["a", "b"]);
        let out = wb.handle(
            7,
            ClientMessage::Pin {
                id: 4,
                table: "zz".into(),
                pinned: true,
            },
        );
        assert!(matches!(&out.reply[0], ServerMessage::Error { kind, .. } if kind == "NameError"));
    }
}
