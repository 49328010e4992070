//! Core of the liveprof workbench: a columnar table model with CSV ingestion,
//! column profiling, a small transform language with a reactive session, and
//! code exports that turn profile selections back into statements.

pub mod csv;
pub mod dsl;
pub mod export;
pub mod fingerprint;
pub mod infer;
pub mod profile;
pub mod session;
pub mod table;

pub use crate::csv::{read_csv, read_csv_str, write_csv, write_csv_string, CsvError, CsvOptions};
pub use crate::fingerprint::{fingerprint, Fingerprint};
pub use crate::infer::infer_semantic_type;
pub use crate::profile::{profile_table, ColumnProfile, ProfileBody, TableProfile};
pub use crate::table::{Cell, Column, ColumnData, SemanticType, Table, TableError};
pub use crate::session::{ExecError, ExecResult, ErrorKind, Session};
pub use crate::export::{export, ExportError, ExportRequest, OutlierMethod, Snippet};
