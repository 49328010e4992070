//! Display order of table profiles.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderMode {
    /// Most recently changed first.
    #[default]
    Recency,
    Alphabetical,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrderingPolicy {
    pub mode: OrderMode,
    pub pinned: BTreeSet<String>,
}

/// A table as seen by the ordering: its name and the epoch of its last change.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderEntry {
    pub name: String,
    pub last_epoch: u64,
}

impl OrderingPolicy {
    pub fn compare(&self, a: &OrderEntry, b: &OrderEntry) -> Ordering {
        let pinned_first = self
            .pinned
            .contains(&b.name)
            .cmp(&self.pinned.contains(&a.name));
        let within = match self.mode {
            OrderMode::Recency => b.last_epoch.cmp(&a.last_epoch),
            OrderMode::Alphabetical => Ordering::Equal,
        };
        pinned_first
            .then(within)
            .then_with(|| a.name.cmp(&b.name))
    }

    /// Sorts `entries` into display order and returns the names.
    pub fn order(&self, mut entries: Vec<OrderEntry>) -> Vec<String> {
        entries.sort_by(|a, b| self.compare(a, b));
        entries.into_iter().map(|e| e.name).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entries(list: &[(&str, u64)]) -> Vec<OrderEntry> {
        list.iter()
            .map(|(n, e)| OrderEntry {
                name: n.to_string(),
                last_epoch: *e,
            })
            .collect()
    }

    fn policy(mode: OrderMode, pinned: &[&str]) -> OrderingPolicy {
        OrderingPolicy {
            mode,
            pinned: pinned.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn pin_dominates_recency() {
        let p = policy(OrderMode::Recency, &["a"]);
        assert_eq!(p.order(entries(&[("b", 5), ("a", 3)])), ["a", "b"]);
    }

    #[test]
    fn newest_first() {
        let p = policy(OrderMode::Recency, &[]);
        assert_eq!(p.order(entries(&[("old", 3), ("new", 5)])), ["new", "old"]);
        assert_eq!(p.order(entries(&[("y", 2), ("x", 2)])), ["x", "y"]);
    }

    #[test]
    fn alphabetical_with_pins() {
        let p = policy(OrderMode::Alphabetical, &["z"]);
        assert_eq!(
            p.order(entries(&[("b", 1), ("z", 1), ("a", 9)])),
            ["z", "a", "b"]
        );
    }
}
