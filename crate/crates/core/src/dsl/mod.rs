//! The line-oriented transform language.
//!
//! ```text
//! load "apts.csv" as df
//! df2 = filter df where county == "---"
//! mutate df set sqft = try_int(sqft)
//! plot df.price as histogram
//! ```
//!
//! Identifiers that are not plain `[A-Za-z_][A-Za-z0-9_]*` words, or that
//! collide with a keyword, are written between backticks.

pub mod ast;
pub mod lexer;
pub mod parser;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ast::*;
pub use lexer::{is_bare_ident, KEYWORDS};
pub use parser::parse;

/// Source location: 1-based line and column of the first character, plus
/// byte offsets `[start, end)` into the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub line: u32,
    pub column: u32,
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(line: u32, column: u32, start: usize, end: usize) -> Self {
        Span {
            line,
            column,
            start,
            end,
        }
    }

    /// Smallest span covering both.
    pub fn to(self, other: Span) -> Span {
        Span {
            end: other.end.max(self.end),
            ..self
        }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("line {line}, column {column}: expected {}, found {found}", .expected.join(" or "))]
pub struct ParseError {
    pub line: u32,
    pub column: u32,
    pub expected: Vec<String>,
    pub found: String,
}

impl ParseError {
    pub fn span(&self) -> Span {
        Span::new(self.line, self.column, 0, 0)
    }
}

/// Renders `name` so that it lexes back as a single identifier.
pub fn quote_ident(name: &str) -> String {
    if is_bare_ident(name) {
        name.to_owned()
    } else {
        format!("`{}`", name.replace('`', "``"))
    }
}

/// Renders a string literal with the escapes the lexer understands.
pub fn quote_str(value: &str) -> String {
    let mut out = String::with_capacity(value.len() + 2);
    out.push('"');
    for c in value.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Renders a finite float as a literal that parses back to the same value.
/// Integral values of moderate size print without a fraction.
pub fn format_number(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:?}")
    }
}
