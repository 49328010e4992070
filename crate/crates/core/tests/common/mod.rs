#![allow(dead_code)]

pub mod check;
pub mod gen;
pub mod oracle;

use std::path::PathBuf;

pub fn fixture(name: &str) -> PathBuf {
    // Resolves from any sibling crate that includes this module.
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}
