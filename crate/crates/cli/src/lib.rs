//! Command implementations behind the `liveprof` binary.

pub mod html;
pub mod repl;
pub mod report;
pub mod run;
pub mod text;
