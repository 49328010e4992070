use std::collections::BTreeSet;

use liveprof_core::session::temp_output_name;
use liveprof_core::{profile_table, Session};
use liveprof_server::{
    ClientMessage, OrderEntry, OrderMode, OrderingPolicy, Outcome, ServerMessage, Snapshot,
    Workbench,
};
use proptest::prelude::*;

const CONN: u64 = 1;

fn bench() -> (tempfile::TempDir, Workbench) {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a.csv"), "v,w\n1,x\n2,y\n2,y\n,z\n").unwrap();
    std::fs::write(dir.path().join("b.csv"), "v,w\n5,q\n").unwrap();
    let wb = Workbench::new(Session::new().with_base_dir(dir.path()));
    (dir, wb)
}

fn exec(wb: &mut Workbench, id: u64, src: &str) -> Outcome {
    wb.handle(
        CONN,
        ClientMessage::Exec {
            id,
            source: src.into(),
        },
    )
}

fn changed(out: &Outcome) -> Vec<String> {
    match &out.reply[0] {
        ServerMessage::ExecResult { changed, .. } => changed.clone(),
        other => panic!("{other:?}"),
    }
}

fn profiles(msgs: &[ServerMessage]) -> Vec<&Snapshot> {
    msgs.iter()
        .filter_map(|m| match m {
            ServerMessage::Profiles(s) => Some(s),
            _ => None,
        })
        .collect()
}

const STATEMENTS: &[&str] = &[
    "load \"a.csv\" as a",
    "load \"b.csv\" as b",
    "c = filter a where v > 1",
    "a = dedupe a",
    "b = b",
    "a",
    "d = sort a by v desc",
    "c = head c 1",
    "x = filter nosuch where v > 0",
    "b = mutate b set v = v + 1",
];

#[test]
fn no_subscriber_no_profiles() {
    let (_d, mut wb) = bench();
    for i in 0..100 {
        let out = exec(&mut wb, i, STATEMENTS[i as usize % STATEMENTS.len()]);
        assert!(out.broadcast.is_empty());
    }
    assert_eq!(wb.profile_computations(), 0);
}

#[test]
fn one_computation_per_changed_table_per_epoch() {
    let (_d, mut wb) = bench();
    wb.handle(CONN, ClientMessage::Subscribe { id: 0 });
    let mut pairs = 0u64;
    for i in 0..100u64 {
        let src = STATEMENTS[(i as usize * 7) % STATEMENTS.len()];
        let out = exec(&mut wb, i, src);
        let ch = changed(&out);
        pairs += ch.len() as u64;
        let p = profiles(&out.broadcast);
        assert_eq!(p.len(), 1);
        let names: BTreeSet<&str> = p[0].profiles.iter().map(|p| p.table_name.as_str()).collect();
        assert_eq!(names, ch.iter().map(String::as_str).collect());
        assert_eq!(wb.profile_computations(), pairs);
    }
    assert!(pairs > 0);
}

#[test]
fn dirty_tables_are_recomputed_on_subscribe() {
    let (_d, mut wb) = bench();
    wb.handle(CONN, ClientMessage::Subscribe { id: 0 });
    exec(&mut wb, 1, "load \"a.csv\" as a\nload \"b.csv\" as b");
    wb.handle(CONN, ClientMessage::Unsubscribe { id: 2 });
    exec(&mut wb, 3, "a = dedupe a\nc = head a 1");
    exec(&mut wb, 4, "c = filter a where v > 1");
    let before = wb.profile_computations();
    let out = wb.handle(CONN, ClientMessage::Subscribe { id: 5 });
    // Only a and c changed while nobody was listening.
    assert_eq!(wb.profile_computations() - before, 2);
    let snap = profiles(&out.reply)[0];
    for p in &snap.profiles {
        let live = wb.session().live_table(&p.table_name).unwrap();
        let mut fresh = profile_table(&live.table);
        fresh.epoch = live.last_epoch;
        assert_eq!(p, &fresh);
    }
    assert_eq!(snap.order, ["c", "a", "b"]);
}

#[test]
fn temp_profile_lifecycle() {
    let (_d, mut wb) = bench();
    wb.handle(CONN, ClientMessage::Subscribe { id: 0 });
    exec(&mut wb, 1, "load \"a.csv\" as a");
    let out = exec(&mut wb, 2, "filter a where v > 1");
    let name = temp_output_name(wb.session().epoch());
    let p = profiles(&out.broadcast)[0];
    assert_eq!(p.profiles.len(), 1);
    assert_eq!(p.profiles[0].table_name, name);
    assert!(p.profiles[0].temporary);
    assert_eq!(p.order[0], name);
    let out = exec(&mut wb, 3, "b2 = a");
    assert_eq!(
        out.broadcast[0],
        ServerMessage::Removed {
            epoch: wb.session().epoch(),
            names: vec![name.clone()]
        }
    );
    assert!(!profiles(&out.broadcast)[0].order.contains(&name));
}

#[test]
fn reset_clears_and_broadcasts() {
    let (_d, mut wb) = bench();
    wb.handle(CONN, ClientMessage::Subscribe { id: 0 });
    exec(&mut wb, 1, "load \"a.csv\" as a\nload \"b.csv\" as b\nload \"a.csv\" as c");
    exec(&mut wb, 2, "c");
    let out = wb.handle(CONN, ClientMessage::Reset { id: 3 });
    let epoch = wb.session().epoch();
    assert_eq!(out.reply, vec![ServerMessage::Ack { id: 3 }]);
    assert_eq!(
        out.broadcast,
        vec![
            ServerMessage::Removed {
                epoch,
                names: vec!["a".into(), "b".into(), "c".into(), temp_output_name(epoch - 1)]
            },
            ServerMessage::Profiles(Snapshot {
                epoch,
                order: vec![],
                profiles: vec![]
            })
        ]
    );
    let snap = wb.snapshot();
    assert!(snap.profiles.is_empty() && snap.order.is_empty());
}

#[test]
fn profile_epochs_increase() {
    let (_d, mut wb) = bench();
    let mut last = None;
    let mut seen = |msgs: &[ServerMessage]| {
        for s in profiles(msgs) {
            if let Some(l) = last {
                assert!(s.epoch > l);
            }
            last = Some(s.epoch);
        }
    };
    seen(&wb.handle(CONN, ClientMessage::Subscribe { id: 0 }).reply);
    for (i, src) in STATEMENTS.iter().enumerate() {
        seen(&exec(&mut wb, i as u64, src).broadcast);
    }
    seen(&wb.handle(CONN, ClientMessage::Reset { id: 99 }).broadcast);
    seen(&exec(&mut wb, 100, "load \"a.csv\" as a").broadcast);
}

#[test]
fn exports_and_errors() {
    let (_d, mut wb) = bench();
    exec(&mut wb, 1, "load \"a.csv\" as a");
    let epoch = wb.session().epoch();
    let out = wb.handle(
        CONN,
        ClientMessage::Export {
            id: 2,
            request: liveprof_core::ExportRequest::CatValue {
                table: "a".into(),
                column: "w".into(),
                value: Some("y".into()),
            },
        },
    );
    assert_eq!(
        out.reply,
        vec![ServerMessage::Snippet {
            id: 2,
            text: "a_sel = filter a where w == \"y\"".into(),
            new_name: Some("a_sel".into())
        }]
    );
    assert_eq!(wb.session().epoch(), epoch);
    let out = wb.handle(
        CONN,
        ClientMessage::Export {
            id: 3,
            request: liveprof_core::ExportRequest::Plot {
                table: "nope".into(),
                column: "w".into(),
            },
        },
    );
    assert!(matches!(&out.reply[0], ServerMessage::Error { id: Some(3), kind, .. } if kind == "UnknownTable"));
    let out = exec(&mut wb, 4, "b = filter a where");
    let ServerMessage::ExecResult { ok, error, .. } = &out.reply[0] else {
        panic!()
    };
    assert!(!ok);
    assert_eq!(error.as_ref().unwrap().kind.to_string(), "ParseError");
}

fn check_order(policy: &OrderingPolicy, entries: &[OrderEntry], order: &[String]) {
    let epoch = |n: &str| entries.iter().find(|e| e.name == n).unwrap().last_epoch;
    assert_eq!(order.len(), entries.len());
    for w in order.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let (pa, pb) = (policy.pinned.contains(a), policy.pinned.contains(b));
        assert!(pa || !pb, "unpinned {a} before pinned {b}");
        if pa == pb {
            match policy.mode {
                OrderMode::Recency => {
                    assert!(epoch(a) > epoch(b) || (epoch(a) == epoch(b) && a < b))
                }
                OrderMode::Alphabetical => assert!(a < b),
            }
        }
    }
}

proptest! {
    #[test]
    fn ordering_is_a_stable_total_order(
        tables in proptest::collection::btree_map("[a-e]{1,3}", 0u64..6, 0..12),
        pin_mask in any::<u16>(),
        alphabetical in any::<bool>(),
        rotate in any::<usize>(),
    ) {
        let entries: Vec<OrderEntry> = tables
            .iter()
            .map(|(n, e)| OrderEntry { name: n.clone(), last_epoch: *e })
            .collect();
        let policy = OrderingPolicy {
            mode: if alphabetical { OrderMode::Alphabetical } else { OrderMode::Recency },
            pinned: entries
                .iter()
                .enumerate()
                .filter(|(i, _)| pin_mask & (1 << i) != 0)
                .map(|(_, e)| e.name.clone())
                .collect(),
        };
        let order = policy.order(entries.clone());
        check_order(&policy, &entries, &order);
        let mut shuffled = entries.clone();
        if !shuffled.is_empty() {
            let k = rotate % shuffled.len();
            shuffled.rotate_left(k);
            shuffled.reverse();
        }
        prop_assert_eq!(policy.order(shuffled), order);
    }

    #[test]
    fn workbench_order_follows_pins_and_epochs(
        steps in proptest::collection::vec((0usize..4, any::<bool>(), any::<bool>()), 1..30),
    ) {
        let (_d, mut wb) = bench();
        wb.handle(CONN, ClientMessage::Subscribe { id: 0 });
        let names = ["a", "b", "c", "d"];
        for (i, (n, pin, rebind)) in steps.into_iter().enumerate() {
            let name = names[n];
            if rebind {
                exec(&mut wb, i as u64, &format!("load \"{}\" as {name}", if i % 2 == 0 { "a.csv" } else { "b.csv" }));
            } else if wb.session().table(name).is_some() {
                let out = wb.handle(CONN, ClientMessage::Pin { id: i as u64, table: name.into(), pinned: pin });
                prop_assert_eq!(&out.reply[0], &ServerMessage::Ack { id: i as u64 });
            }
            let snap = wb.snapshot();
            let entries: Vec<OrderEntry> = wb
                .session()
                .live_tables()
                .into_iter()
                .map(|t| OrderEntry { name: t.name, last_epoch: t.last_epoch })
                .collect();
            check_order(&wb.policy(), &entries, &snap.order);
        }
    }
}
