//! Columnar table model.
//!
//! A [`Table`] is an ordered list of typed [`Column`]s of equal length. Cells
//! are stored in per-type vectors of `Option<T>`, so a non-null cell always
//! conforms to the column's [`SemanticType`] and a null is never confused with
//! an empty string.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Profiling-oriented column classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SemanticType {
    Boolean,
    Integer,
    Float,
    Temporal,
    Categorical,
}

impl SemanticType {
    pub fn as_str(self) -> &'static str {
        match self {
            SemanticType::Boolean => "boolean",
            SemanticType::Integer => "integer",
            SemanticType::Float => "float",
            SemanticType::Temporal => "temporal",
            SemanticType::Categorical => "categorical",
        }
    }

    pub fn is_numeric(self) -> bool {
        matches!(self, SemanticType::Integer | SemanticType::Float)
    }

    /// Boolean columns are profiled exactly like categorical ones.
    pub fn is_categorical_like(self) -> bool {
        matches!(self, SemanticType::Boolean | SemanticType::Categorical)
    }
}

impl fmt::Display for SemanticType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A single owned cell value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    /// UTC epoch milliseconds.
    Time(i64),
}

impl Cell {
    pub fn is_null(&self) -> bool {
        matches!(self, Cell::Null)
    }
}

/// Typed storage for one column.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Boolean(Vec<Option<bool>>),
    Integer(Vec<Option<i64>>),
    Float(Vec<Option<f64>>),
    /// UTC epoch milliseconds.
    Temporal(Vec<Option<i64>>),
    Categorical(Vec<Option<String>>),
}

macro_rules! each_variant {
    ($data:expr, $v:ident => $body:expr) => {
        match $data {
            ColumnData::Boolean($v) => $body,
            ColumnData::Integer($v) => $body,
            ColumnData::Float($v) => $body,
            ColumnData::Temporal($v) => $body,
            ColumnData::Categorical($v) => $body,
        }
    };
}

impl ColumnData {
    pub fn stype(&self) -> SemanticType {
        match self {
            ColumnData::Boolean(_) => SemanticType::Boolean,
            ColumnData::Integer(_) => SemanticType::Integer,
            ColumnData::Float(_) => SemanticType::Float,
            ColumnData::Temporal(_) => SemanticType::Temporal,
            ColumnData::Categorical(_) => SemanticType::Categorical,
        }
    }

    pub fn len(&self) -> usize {
        each_variant!(self, v => v.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_null(&self, row: usize) -> bool {
        each_variant!(self, v => v[row].is_none())
    }

    pub fn null_count(&self) -> usize {
        each_variant!(self, v => v.iter().filter(|c| c.is_none()).count())
    }

    pub fn cell(&self, row: usize) -> Cell {
        match self {
            ColumnData::Boolean(v) => v[row].map_or(Cell::Null, Cell::Bool),
            ColumnData::Integer(v) => v[row].map_or(Cell::Null, Cell::Int),
            ColumnData::Float(v) => v[row].map_or(Cell::Null, Cell::Float),
            ColumnData::Temporal(v) => v[row].map_or(Cell::Null, Cell::Time),
            ColumnData::Categorical(v) => v[row].clone().map_or(Cell::Null, Cell::Str),
        }
    }

    /// Non-null values widened to `f64`, in row order. Empty for non-numeric columns.
    pub fn numeric_values(&self) -> Vec<f64> {
        match self {
            ColumnData::Integer(v) => v.iter().flatten().map(|&x| x as f64).collect(),
            ColumnData::Float(v) => v.iter().flatten().copied().collect(),
            _ => Vec::new(),
        }
    }

    /// Non-null values as `f64` paired with their row index.
    pub fn numeric_indexed(&self) -> Vec<(usize, f64)> {
        match self {
            ColumnData::Integer(v) => v
                .iter()
                .enumerate()
                .filter_map(|(i, x)| x.map(|x| (i, x as f64)))
                .collect(),
            ColumnData::Float(v) => v
                .iter()
                .enumerate()
                .filter_map(|(i, x)| x.map(|x| (i, x)))
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Builds a new column holding the given rows, in the given order.
    pub fn take(&self, rows: &[usize]) -> ColumnData {
        match self {
            ColumnData::Boolean(v) => ColumnData::Boolean(rows.iter().map(|&r| v[r]).collect()),
            ColumnData::Integer(v) => ColumnData::Integer(rows.iter().map(|&r| v[r]).collect()),
            ColumnData::Float(v) => ColumnData::Float(rows.iter().map(|&r| v[r]).collect()),
            ColumnData::Temporal(v) => ColumnData::Temporal(rows.iter().map(|&r| v[r]).collect()),
            ColumnData::Categorical(v) => {
                ColumnData::Categorical(rows.iter().map(|&r| v[r].clone()).collect())
            }
        }
    }

    /// Builds a column of `stype` from owned cells. Fails on the first cell that
    /// does not conform, returning its row index.
    pub fn from_cells(stype: SemanticType, cells: Vec<Cell>) -> Result<ColumnData, usize> {
        fn collect<T>(
            cells: Vec<Cell>,
            pick: impl Fn(Cell) -> Option<T>,
        ) -> Result<Vec<Option<T>>, usize> {
            cells
                .into_iter()
                .enumerate()
                .map(|(i, c)| {
                    if c.is_null() {
                        Ok(None)
                    } else {
                        pick(c).map(Some).ok_or(i)
                    }
                })
                .collect()
        }
        Ok(match stype {
            SemanticType::Boolean => ColumnData::Boolean(collect(cells, |c| match c {
                Cell::Bool(b) => Some(b),
                _ => None,
            })?),
            SemanticType::Integer => ColumnData::Integer(collect(cells, |c| match c {
                Cell::Int(x) => Some(x),
                _ => None,
            })?),
            SemanticType::Float => ColumnData::Float(collect(cells, |c| match c {
                Cell::Float(x) if x.is_finite() => Some(x),
                Cell::Int(x) => Some(x as f64),
                _ => None,
            })?),
            SemanticType::Temporal => ColumnData::Temporal(collect(cells, |c| match c {
                Cell::Time(x) => Some(x),
                _ => None,
            })?),
            SemanticType::Categorical => ColumnData::Categorical(collect(cells, |c| match c {
                Cell::Str(s) => Some(s),
                _ => None,
            })?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    name: String,
    data: ColumnData,
}

impl Column {
    pub fn new(name: impl Into<String>, data: ColumnData) -> Self {
        Column {
            name: name.into(),
            data,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stype(&self) -> SemanticType {
        self.data.stype()
    }

    pub fn data(&self) -> &ColumnData {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn null_count(&self) -> usize {
        self.data.null_count()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("column `{name}` has {len} rows, expected {expected}")]
    LengthMismatch {
        name: String,
        len: usize,
        expected: usize,
    },
    #[error("duplicate column name `{0}`")]
    DuplicateColumn(String),
}

/// A named, immutable columnar dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    name: String,
    columns: Vec<Column>,
    nrows: usize,
}

impl Table {
    /// Builds a table. With no columns the row count is taken from `nrows`.
    pub fn with_rows(
        name: impl Into<String>,
        columns: Vec<Column>,
        nrows: usize,
    ) -> Result<Self, TableError> {
        let mut seen = HashSet::new();
        for c in &columns {
            if c.len() != nrows {
                return Err(TableError::LengthMismatch {
                    name: c.name.clone(),
                    len: c.len(),
                    expected: nrows,
                });
            }
            if !seen.insert(c.name.as_str()) {
                return Err(TableError::DuplicateColumn(c.name.clone()));
            }
        }
        Ok(Table {
            name: name.into(),
            columns,
            nrows,
        })
    }

    /// Builds a table whose row count is the length of the first column.
    pub fn new(name: impl Into<String>, columns: Vec<Column>) -> Result<Self, TableError> {
        let nrows = columns.first().map_or(0, Column::len);
        Self::with_rows(name, columns, nrows)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn into_columns(self) -> Vec<Column> {
        self.columns
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Rows selected by index, in the given order.
    pub fn take_rows(&self, rows: &[usize]) -> Table {
        Table {
            name: self.name.clone(),
            columns: self
                .columns
                .iter()
                .map(|c| Column::new(c.name.clone(), c.data.take(rows)))
                .collect(),
            nrows: rows.len(),
        }
    }
}
