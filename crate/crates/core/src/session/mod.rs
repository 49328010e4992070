//! The execution session: named tables, an epoch counter, pins and the
//! temporary output slot.
//!
//! Each [`Session::execute`] call advances the epoch by one, parses the whole
//! source, then runs statements in order. A failing statement leaves no trace
//! but earlier statements from the same call keep their effects. Which tables
//! changed is decided by fingerprint comparison against the state before the
//! call.

mod error;
pub mod eval;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::csv::{read_csv, CsvError, CsvOptions};
use crate::dsl::{self, Ident, PlotKind, Span, StatementKind};
use crate::fingerprint::{fingerprint, Fingerprint};
use crate::table::{SemanticType, Table};

pub use error::{ErrorKind, ExecError};
pub use eval::{cast_column, duplicated_flags, CastTarget};

/// Name given to the unnamed result of a bare table expression.
pub fn temp_output_name(epoch: u64) -> String {
    format!("Output of statement {epoch}")
}

#[derive(Debug, Clone)]
pub struct Binding {
    pub table: Arc<Table>,
    pub fingerprint: Fingerprint,
    /// Epoch at which the content last changed.
    pub last_epoch: u64,
}

/// A table visible to profiling: every named binding plus the temporary output.
#[derive(Debug, Clone)]
pub struct LiveTable {
    pub name: String,
    pub table: Arc<Table>,
    pub fingerprint: Fingerprint,
    pub last_epoch: u64,
    pub temporary: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlotRequest {
    pub table: String,
    pub column: String,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecResult {
    pub epoch: u64,
    pub ok: bool,
    pub error: Option<ExecError>,
    pub changed: Vec<String>,
    pub removed: Vec<String>,
    pub plots: Vec<PlotRequest>,
}

#[derive(Debug, Clone)]
pub struct Session {
    env: BTreeMap<String, Binding>,
    epoch: u64,
    pinned: BTreeSet<String>,
    temp_output: Option<(String, Binding)>,
    base_dir: PathBuf,
    csv_options: CsvOptions,
}

impl Default for Session {
    fn default() -> Self {
        Session::new()
    }
}

impl Session {
    pub fn new() -> Self {
        Session {
            env: BTreeMap::new(),
            epoch: 0,
            pinned: BTreeSet::new(),
            temp_output: None,
            base_dir: PathBuf::from("."),
            csv_options: CsvOptions::default(),
        }
    }

    /// Relative `load` paths resolve against `dir`.
    pub fn with_base_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.base_dir = dir.into();
        self
    }

    pub fn with_csv_options(mut self, options: CsvOptions) -> Self {
        self.csv_options = options;
        self
    }

    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    pub fn table(&self, name: &str) -> Option<&Arc<Table>> {
        self.env.get(name).map(|b| &b.table)
    }

    pub fn binding(&self, name: &str) -> Option<&Binding> {
        self.env.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.env.keys().map(String::as_str)
    }

    pub fn temp_output(&self) -> Option<(&str, &Arc<Table>)> {
        self.temp_output.as_ref().map(|(n, b)| (n.as_str(), &b.table))
    }

    pub fn pinned(&self) -> &BTreeSet<String> {
        &self.pinned
    }

    pub fn is_empty(&self) -> bool {
        self.env.is_empty() && self.temp_output.is_none()
    }

    /// Named bindings in name order, then the temporary output.
    pub fn live_tables(&self) -> Vec<LiveTable> {
        let mut out: Vec<LiveTable> = self
            .env
            .iter()
            .map(|(name, b)| LiveTable {
                name: name.clone(),
                table: Arc::clone(&b.table),
                fingerprint: b.fingerprint,
                last_epoch: b.last_epoch,
                temporary: false,
            })
            .collect();
        if let Some((name, b)) = &self.temp_output {
            out.push(LiveTable {
                name: name.clone(),
                table: Arc::clone(&b.table),
                fingerprint: b.fingerprint,
                last_epoch: b.last_epoch,
                temporary: true,
            });
        }
        out
    }

    pub fn live_table(&self, name: &str) -> Option<LiveTable> {
        self.live_tables().into_iter().find(|t| t.name == name)
    }

    pub fn pin(&mut self, name: &str) -> Result<(), ExecError> {
        if !self.env.contains_key(name)
            && self.temp_output.as_ref().is_none_or(|(n, _)| n != name)
        {
            return Err(ExecError::new(
                ErrorKind::NameError,
                format!("unknown table `{name}`"),
                None,
            ));
        }
        self.pinned.insert(name.to_owned());
        Ok(())
    }

    pub fn unpin(&mut self, name: &str) {
        self.pinned.remove(name);
    }

    /// Clears every table, pin and the temporary output. The epoch advances
    /// so it is never reused. Returns the removed names in name order.
    pub fn reset(&mut self) -> Vec<String> {
        self.epoch += 1;
        let mut removed: Vec<String> = std::mem::take(&mut self.env).into_keys().collect();
        if let Some((name, _)) = self.temp_output.take() {
            removed.push(name);
        }
        self.pinned.clear();
        removed
    }

    pub fn execute(&mut self, source: &str) -> ExecResult {
        self.epoch += 1;
        let epoch = self.epoch;
        let mut removed = Vec::new();
        if let Some((name, _)) = self.temp_output.take() {
            self.pinned.remove(&name);
            removed.push(name);
        }
        let mut result = ExecResult {
            epoch,
            ok: true,
            error: None,
            changed: Vec::new(),
            removed,
            plots: Vec::new(),
        };

        let program = match dsl::parse(source) {
            Ok(p) => p,
            Err(e) => {
                result.ok = false;
                result.error = Some(e.into());
                return result;
            }
        };

        // Pre-call fingerprints of every name a statement rebinds.
        let mut touched: Vec<(String, Option<Fingerprint>)> = Vec::new();
        let mut temp: Option<Table> = None;

        for stmt in &program.statements {
            let outcome = match &stmt.kind {
                StatementKind::Load { path, name } => self
                    .load(path, stmt.span)
                    .map(|t| Some((name, t))),
                StatementKind::Assign { name, expr } => {
                    eval::eval_table(expr, &|n| self.table(n).cloned())
                        .map(|t| Some((name, Arc::unwrap_or_clone(t))))
                }
                StatementKind::Expr(expr) => {
                    eval::eval_table(expr, &|n| self.table(n).cloned()).map(|t| {
                        temp = Some(Arc::unwrap_or_clone(t));
                        None
                    })
                }
                StatementKind::Plot {
                    table,
                    column,
                    kind,
                } => self.check_plot(table, column, *kind).map(|p| {
                    result.plots.push(p);
                    None
                }),
            };
            match outcome {
                Ok(Some((name, table))) => {
                    if !touched.iter().any(|(n, _)| *n == name.name) {
                        touched.push((
                            name.name.clone(),
                            self.env.get(&name.name).map(|b| b.fingerprint),
                        ));
                    }
                    self.bind(&name.name, table);
                }
                Ok(None) => {}
                Err(e) => {
                    result.ok = false;
                    result.error = Some(e);
                    break;
                }
            }
        }

        for (name, before) in touched {
            let b = self.env.get_mut(&name).expect("bound during this call");
            if before == Some(b.fingerprint) {
                continue;
            }
            b.last_epoch = epoch;
            result.changed.push(name);
        }
        if let Some(t) = temp {
            let name = temp_output_name(epoch);
            let t = t.renamed(name.clone());
            self.temp_output = Some((
                name.clone(),
                Binding {
                    fingerprint: fingerprint(&t),
                    table: Arc::new(t),
                    last_epoch: epoch,
                },
            ));
            result.changed.push(name);
        }
        result
    }

    fn bind(&mut self, name: &str, table: Table) {
        let table = table.renamed(name);
        let fp = fingerprint(&table);
        let last_epoch = self.env.get(name).map_or(self.epoch, |b| b.last_epoch);
        self.env.insert(
            name.to_owned(),
            Binding {
                table: Arc::new(table),
                fingerprint: fp,
                last_epoch,
            },
        );
    }

    fn load(&self, path: &str, span: Span) -> Result<Table, ExecError> {
        let p = Path::new(path);
        let full = if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        };
        read_csv(&full, &self.csv_options).map_err(|e| {
            let kind = match e {
                CsvError::Io { .. } => ErrorKind::IoError,
                _ => ErrorKind::CsvError,
            };
            ExecError::new(kind, e.to_string(), Some(span))
        })
    }

    fn check_plot(
        &self,
        table: &Ident,
        column: &Ident,
        kind: PlotKind,
    ) -> Result<PlotRequest, ExecError> {
        let t = self
            .table(&table.name)
            .ok_or_else(|| ExecError::name(format!("unknown table `{}`", table.name), table.span))?;
        let c = t.column(&column.name).ok_or_else(|| {
            ExecError::name(
                format!("unknown column `{}` in table `{}`", column.name, table.name),
                column.span,
            )
        })?;
        let expected = plot_kind_for(c.stype());
        if expected != kind {
            return Err(ExecError::type_error(
                format!(
                    "`{}` is {}; plot it as {}",
                    column.name,
                    c.stype(),
                    expected.as_str()
                ),
                column.span,
            ));
        }
        Ok(PlotRequest {
            table: table.name.clone(),
            column: column.name.clone(),
            kind: kind.as_str().to_owned(),
        })
    }
}

/// The chart used for a column of the given type.
pub fn plot_kind_for(stype: SemanticType) -> PlotKind {
    match stype {
        SemanticType::Integer | SemanticType::Float => PlotKind::Histogram,
        SemanticType::Temporal => PlotKind::Timeline,
        SemanticType::Boolean | SemanticType::Categorical => PlotKind::TopK,
    }
}
