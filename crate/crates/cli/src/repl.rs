//! Line-oriented read-execute-print loop over a local session.

use std::io::{BufRead, Write};

use anyhow::Result;
use liveprof_core::session::ExecResult;
use liveprof_core::{profile_table, Session};

use crate::text::{plot_text, profile_table_text};

const HELP: &str = "statements are executed one line at a time\n\
:reset            clear every table\n\
:pin NAME         pin a table\n\
:unpin NAME       unpin a table\n\
:tables           list tables\n\
:quit             exit (or Ctrl-D)\n";

pub struct Repl {
    session: Session,
}

impl Default for Repl {
    fn default() -> Self {
        Repl::new(Session::new())
    }
}

impl Repl {
    pub fn new(session: Session) -> Self {
        Repl { session }
    }

    pub fn session(&self) -> &Session {
        &self.session
    }

    /// Executes `source` and renders the outcome.
    pub fn execute(&mut self, source: &str) -> String {
        let r = self.session.execute(source);
        self.render(&r)
    }

    fn render(&self, r: &ExecResult) -> String {
        let mut out = String::new();
        if let Some(e) = &r.error {
            out.push_str(&format!("{e}\n"));
        }
        for name in &r.changed {
            if let Some(t) = self.session.live_table(name) {
                let mut p = profile_table(&t.table);
                p.table_name = t.name.clone();
                out.push_str(&profile_table_text(&p));
            }
        }
        for plot in &r.plots {
            if let Some(t) = self.session.table(&plot.table) {
                let p = profile_table(t);
                if let Some(c) = p.column(&plot.column) {
                    out.push_str(&plot_text(c));
                }
            }
        }
        out
    }

    /// Handles one input line; `None` means quit.
    pub fn handle_line(&mut self, line: &str) -> Option<String> {
        let trimmed = line.trim();
        let Some(cmd) = trimmed.strip_prefix(':') else {
            return Some(if trimmed.is_empty() {
                String::new()
            } else {
                self.execute(line)
            });
        };
        let (name, arg) = cmd.split_once(' ').unwrap_or((cmd, ""));
        let arg = arg.trim();
        Some(match name {
            "quit" | "q" => return None,
            "help" => HELP.to_owned(),
            "reset" => {
                let removed = self.session.reset();
                format!("removed {} table(s)\n", removed.len())
            }
            "pin" => match self.session.pin(arg) {
                Ok(()) => String::new(),
                Err(e) => format!("{e}\n"),
            },
            "unpin" => {
                self.session.unpin(arg);
                String::new()
            }
            "tables" => self
                .session
                .live_tables()
                .iter()
                .map(|t| format!("{}: {} rows × {} cols\n", t.name, t.table.nrows(), t.table.ncols()))
                .collect(),
            _ => format!("unknown command :{name}\n{HELP}"),
        })
    }

    /// Reads lines until end of input or `:quit`.
    pub fn run(&mut self, input: impl BufRead, mut output: impl Write, prompt: bool) -> Result<()> {
        let mut lines = input.lines();
        loop {
            if prompt {
                write!(output, "> ")?;
                output.flush()?;
            }
            let Some(line) = lines.next() else {
                if prompt {
                    writeln!(output)?;
                }
                return Ok(());
            };
            match self.handle_line(&line?) {
                Some(text) => output.write_all(text.as_bytes())?,
                None => return Ok(()),
            }
        }
    }
}
