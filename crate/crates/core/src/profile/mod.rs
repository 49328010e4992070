//! Column and table profiles.
//!
//! Every profile is pre-binned: its serialized size depends on the number of
//! bins and top values, never on the row count.

pub mod categorical;
pub mod histogram;
pub mod stats;
pub mod temporal;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fingerprint::{fingerprint, Fingerprint};
use crate::table::{Column, ColumnData, SemanticType, Table};

pub use categorical::{boolean_profile, categorical_profile, CategoricalSummary, ValueCount, TOP_K};
pub use histogram::{numeric_histogram, Histogram};
pub use stats::{
    numeric_summary, outliers_iqr, outliers_sigma, quantile, NumericSummary, Outliers, Sortedness,
};
pub use temporal::{temporal_profile, TemporalSummary};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ProfileError {
    #[error("quantile of an empty sequence")]
    EmptyInput,
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileBody {
    Numeric {
        histogram: Histogram,
        summary: NumericSummary,
    },
    Categorical(CategoricalSummary),
    Temporal(TemporalSummary),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnProfile {
    pub name: String,
    pub stype: SemanticType,
    pub n_null: usize,
    pub null_fraction: f64,
    pub body: ProfileBody,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableProfile {
    pub table_name: String,
    pub nrows: usize,
    pub ncols: usize,
    pub epoch: u64,
    pub fingerprint: Fingerprint,
    pub temporary: bool,
    pub columns: Vec<ColumnProfile>,
}

impl TableProfile {
    /// Canonical JSON: fixed key order, shortest round-trip floats.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(self).expect("profiles contain only finite floats")
    }

    pub fn column(&self, name: &str) -> Option<&ColumnProfile> {
        self.columns.iter().find(|c| c.name == name)
    }
}

/// Numeric cells widened to `f64`; `None` for other column types.
pub fn numeric_cells(data: &ColumnData) -> Option<Vec<Option<f64>>> {
    match data {
        ColumnData::Integer(v) => Some(v.iter().map(|x| x.map(|x| x as f64)).collect()),
        ColumnData::Float(v) => Some(v.clone()),
        _ => None,
    }
}

pub fn profile_column(column: &Column, nrows: usize) -> ColumnProfile {
    let n_null = column.null_count();
    let body = match column.data() {
        ColumnData::Integer(_) | ColumnData::Float(_) => {
            let cells = numeric_cells(column.data()).expect("numeric column");
            ProfileBody::Numeric {
                histogram: numeric_histogram(&cells),
                summary: numeric_summary(&cells),
            }
        }
        ColumnData::Boolean(v) => ProfileBody::Categorical(boolean_profile(v, TOP_K)),
        ColumnData::Categorical(v) => {
            ProfileBody::Categorical(categorical_profile(v.iter().map(Option::as_deref), TOP_K))
        }
        ColumnData::Temporal(v) => ProfileBody::Temporal(temporal_profile(v)),
    };
    ColumnProfile {
        name: column.name().to_owned(),
        stype: column.stype(),
        n_null,
        null_fraction: if nrows == 0 {
            0.0
        } else {
            n_null as f64 / nrows as f64
        },
        body,
    }
}

/// Profiles every column of `table`. Epoch 0, not temporary; callers that
/// track executions set those fields.
pub fn profile_table(table: &Table) -> TableProfile {
    TableProfile {
        table_name: table.name().to_owned(),
        nrows: table.nrows(),
        ncols: table.ncols(),
        epoch: 0,
        fingerprint: fingerprint(table),
        temporary: false,
        columns: table
            .columns()
            .iter()
            .map(|c| profile_column(c, table.nrows()))
            .collect(),
    }
}
