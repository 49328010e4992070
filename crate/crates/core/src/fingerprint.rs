//! Content fingerprints for change detection.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use xxhash_rust::xxh3::Xxh3;

use crate::table::{ColumnData, SemanticType, Table};

const NULL_MARKER: u8 = 0x00;
const VALUE_MARKER: u8 = 0x01;

/// 64-bit content hash plus shape. The table's own name is not part of the
/// content; column names, types, values and order are.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    #[serde(serialize_with = "hex_ser", deserialize_with = "hex_de")]
    pub hash: u64,
    pub nrows: usize,
    pub ncols: usize,
}

fn hex_ser<S: Serializer>(hash: &u64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{hash:016x}"))
}

fn hex_de<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
    let s = String::deserialize(d)?;
    u64::from_str_radix(&s, 16).map_err(serde::de::Error::custom)
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x} ({}x{})", self.hash, self.nrows, self.ncols)
    }
}

fn type_tag(t: SemanticType) -> u8 {
    match t {
        SemanticType::Boolean => 1,
        SemanticType::Integer => 2,
        SemanticType::Float => 3,
        SemanticType::Temporal => 4,
        SemanticType::Categorical => 5,
    }
}

fn put_len(h: &mut Xxh3, n: usize) {
    h.update(&(n as u64).to_le_bytes());
}

fn put_cells<T>(h: &mut Xxh3, cells: &[Option<T>], mut put: impl FnMut(&mut Xxh3, &T)) {
    for c in cells {
        match c {
            None => h.update(&[NULL_MARKER]),
            Some(v) => {
                h.update(&[VALUE_MARKER]);
                put(h, v);
            }
        }
    }
}

/// Streams schema then cells (column-major) through XXH3-64 with seed 0.
pub fn fingerprint(table: &Table) -> Fingerprint {
    let mut h = Xxh3::new();
    put_len(&mut h, table.ncols());
    put_len(&mut h, table.nrows());
    for c in table.columns() {
        put_len(&mut h, c.name().len());
        h.update(c.name().as_bytes());
        h.update(&[type_tag(c.stype())]);
    }
    for c in table.columns() {
        match c.data() {
            ColumnData::Boolean(v) => put_cells(&mut h, v, |h, b| h.update(&[u8::from(*b)])),
            ColumnData::Integer(v) | ColumnData::Temporal(v) => {
                put_cells(&mut h, v, |h, x| h.update(&x.to_le_bytes()))
            }
            ColumnData::Float(v) => put_cells(&mut h, v, |h, x| {
                // 0.0 == -0.0 in the table model, so they must hash alike.
                let x = if *x == 0.0 { 0.0f64 } else { *x };
                h.update(&x.to_bits().to_le_bytes())
            }),
            ColumnData::Categorical(v) => put_cells(&mut h, v, |h, s| {
                put_len(h, s.len());
                h.update(s.as_bytes());
            }),
        }
    }
    Fingerprint {
        hash: h.digest(),
        nrows: table.nrows(),
        ncols: table.ncols(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Column;

    fn table(values: Vec<Option<i64>>, name: &str) -> Table {
        Table::new("t", vec![Column::new(name, ColumnData::Integer(values))]).unwrap()
    }

    #[test]
    fn copy_has_same_fingerprint() {
        let t = table(vec![Some(1), None, Some(3)], "a");
        assert_eq!(fingerprint(&t), fingerprint(&t.clone()));
    }

    #[test]
    fn table_name_is_not_content() {
        let t = table(vec![Some(1)], "a");
        assert_eq!(fingerprint(&t), fingerprint(&t.clone().renamed("other")));
    }

    #[test]
    fn single_cell_change_changes_hash() {
        let a = fingerprint(&table(vec![Some(1), Some(2)], "a"));
        let b = fingerprint(&table(vec![Some(2), Some(2)], "a"));
        assert_ne!(a.hash, b.hash);
    }

    #[test]
    fn rename_changes_hash() {
        let a = fingerprint(&table(vec![Some(1), Some(2)], "a"));
        let b = fingerprint(&table(vec![Some(1), Some(2)], "b"));
        assert_ne!(a.hash, b.hash);
    }

    #[test]
    fn type_change_changes_hash() {
        let a = Table::new("t", vec![Column::new("a", ColumnData::Integer(vec![Some(0)]))]).unwrap();
        let b = Table::new("t", vec![Column::new("a", ColumnData::Temporal(vec![Some(0)]))]).unwrap();
        assert_ne!(fingerprint(&a).hash, fingerprint(&b).hash);
    }

    #[test]
    fn null_differs_from_value() {
        let a = fingerprint(&table(vec![None], "a"));
        let b = fingerprint(&table(vec![Some(0)], "a"));
        assert_ne!(a.hash, b.hash);
    }

    #[test]
    fn string_boundaries_matter() {
        let mk = |a: &str, b: &str| {
            Table::new(
                "t",
                vec![Column::new(
                    "s",
                    ColumnData::Categorical(vec![Some(a.into()), Some(b.into())]),
                )],
            )
            .unwrap()
        };
        assert_ne!(
            fingerprint(&mk("ab", "c")).hash,
            fingerprint(&mk("a", "bc")).hash
        );
    }

    #[test]
    fn stable_across_runs() {
        // Frozen value: the byte layout and hash function are part of the contract.
        let t = table(vec![Some(1), None, Some(3)], "a");
        let fp = fingerprint(&t);
        assert_eq!(fp.nrows, 3);
        assert_eq!(fp.ncols, 1);
        assert_eq!(format!("{:016x}", fp.hash), FROZEN);
    }

    const FROZEN: &str = "892bcf1e5f39a638";
}
