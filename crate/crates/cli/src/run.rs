//! Headless script execution.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use liveprof_core::session::ExecResult;
use liveprof_core::{profile_table, Session};

/// Executes a whole script in one call and writes `<name>.json` for every
/// named table left in the session, even when a statement failed.
pub fn run_script(script: &Path, out_dir: &Path) -> Result<(ExecResult, Vec<PathBuf>)> {
    let source = std::fs::read_to_string(script)
        .with_context(|| format!("reading {}", script.display()))?;
    let base = script.parent().unwrap_or(Path::new("."));
    let mut session = Session::new().with_base_dir(base);
    let result = session.execute(&source);
    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let mut written = Vec::new();
    for name in session.names() {
        let binding = session.binding(name).expect("listed name");
        let mut profile = profile_table(&binding.table);
        profile.table_name = name.to_owned();
        profile.epoch = binding.last_epoch;
        let file = out_dir.join(format!("{}.json", file_stem(name)));
        let mut json = profile.to_canonical_json();
        json.push('\n');
        std::fs::write(&file, json).with_context(|| format!("writing {}", file.display()))?;
        written.push(file);
    }
    Ok((result, written))
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if matches!(c, '/' | '\\' | '\0') { '_' } else { c })
        .collect()
}
