//! One-shot profile reports for a single CSV file.

use std::path::Path;

use anyhow::{bail, Context, Result};
use liveprof_core::dsl::{is_bare_ident, quote_ident, quote_str};
use liveprof_core::Session;
use liveprof_server::{ClientMessage, ServerMessage, Snapshot, Workbench};

/// A DSL identifier derived from the file stem: characters outside
/// `[A-Za-z0-9_]` become `_`, and a leading digit or keyword gets padded.
pub fn table_name_for(path: &Path) -> String {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut name: String = stem
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if !name.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
        name.insert_str(0, "t_");
    }
    if !is_bare_ident(&name) {
        name.push('_');
    }
    name
}

/// The statement that loads `path` the way `report` and a live session
/// would: `load "<path>" as <stem>`.
pub fn load_statement(path: &Path) -> String {
    format!(
        "load {} as {}",
        quote_str(&path.to_string_lossy()),
        quote_ident(&table_name_for(path))
    )
}

/// Loads `path` into a fresh workbench as its first statement and returns
/// the snapshot a subscriber would receive.
pub fn snapshot_for(path: &Path) -> Result<Snapshot> {
    let mut wb = Workbench::new(Session::new());
    let out = wb.handle(
        0,
        ClientMessage::Exec {
            id: 0,
            source: load_statement(path),
        },
    );
    if let Some(ServerMessage::ExecResult {
        error: Some(e), ..
    }) = out.reply.first()
    {
        bail!("{}: {}", path.display(), e);
    }
    Ok(wb.snapshot())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Html,
}

pub fn render(snapshot: &Snapshot, format: Format) -> String {
    match format {
        Format::Json => snapshot.to_json_line(),
        Format::Html => crate::html::render(snapshot),
    }
}

pub fn cmd_report(data: &Path, format: Format, out: &Path) -> Result<()> {
    let snapshot = snapshot_for(data)?;
    std::fs::write(out, render(&snapshot, format))
        .with_context(|| format!("writing {}", out.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_from_stems() {
        assert_eq!(table_name_for(Path::new("/x/apartments.csv")), "apartments");
        assert_eq!(table_name_for(Path::new("sales 2021.csv")), "sales_2021");
        assert_eq!(table_name_for(Path::new("2021.csv")), "t_2021");
        assert_eq!(table_name_for(Path::new("sort.csv")), "sort_");
        assert_eq!(table_name_for(Path::new(".csv")), "_csv");
    }
}
