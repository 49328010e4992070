//! RFC-4180 CSV ingestion and export.
//!
//! NA tokens are only recognised in unquoted fields, so a quoted `""` or
//! `"NA"` stays a string. The writer relies on this to keep empty strings
//! distinct from nulls.

use std::collections::HashSet;
use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::infer::{column_from_tokens, format_timestamp};
use crate::table::{Column, ColumnData, Table};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvOptions {
    pub delimiter: u8,
    pub na_tokens: Vec<String>,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            delimiter: b',',
            na_tokens: ["", "NA", "NaN", "null"].map(String::from).to_vec(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: unclosed quoted field")]
    UnclosedQuote { line: usize },
    #[error("missing header row")]
    MissingHeader,
    #[error("line {line}: duplicate column name `{name}`")]
    DuplicateColumn { line: usize, name: String },
}

impl CsvError {
    /// 1-based line number of the offending record, when there is one.
    pub fn line(&self) -> Option<usize> {
        match self {
            CsvError::RaggedRow { line, .. }
            | CsvError::UnclosedQuote { line }
            | CsvError::DuplicateColumn { line, .. } => Some(*line),
            CsvError::Io { .. } | CsvError::MissingHeader => None,
        }
    }
}

struct Field {
    text: String,
    quoted: bool,
}

struct Record {
    line: usize,
    fields: Vec<Field>,
}

fn split_records(text: &str, delimiter: u8) -> Result<Vec<Record>, CsvError> {
    let delimiter = char::from(delimiter);
    let mut records = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;

    while chars.peek().is_some() {
        let start_line = line;
        let mut fields = Vec::new();
        let mut field = Field {
            text: String::new(),
            quoted: false,
        };
        let mut in_quotes = false;
        loop {
            let Some(c) = chars.next() else {
                if in_quotes {
                    return Err(CsvError::UnclosedQuote { line: start_line });
                }
                break;
            };
            if in_quotes {
                match c {
                    '"' if chars.peek() == Some(&'"') => {
                        chars.next();
                        field.text.push('"');
                    }
                    '"' => in_quotes = false,
                    '\n' => {
                        line += 1;
                        field.text.push(c);
                    }
                    _ => field.text.push(c),
                }
                continue;
            }
            match c {
                '"' if field.text.is_empty() && !field.quoted => {
                    field.quoted = true;
                    in_quotes = true;
                }
                c if c == delimiter => {
                    fields.push(std::mem::replace(
                        &mut field,
                        Field {
                            text: String::new(),
                            quoted: false,
                        },
                    ));
                }
                '\r' if chars.peek() == Some(&'\n') => {}
                '\n' => {
                    line += 1;
                    break;
                }
                _ => field.text.push(c),
            }
        }
        fields.push(field);
        records.push(Record {
            line: start_line,
            fields,
        });
    }
    Ok(records)
}

/// Parses CSV text into a table named `name`.
pub fn read_csv_str(name: &str, text: &str, options: &CsvOptions) -> Result<Table, CsvError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut records = split_records(text, options.delimiter)?.into_iter();
    let header = records.next().ok_or(CsvError::MissingHeader)?;
    let names: Vec<String> = header.fields.into_iter().map(|f| f.text).collect();
    let mut seen = HashSet::new();
    for n in &names {
        if !seen.insert(n.as_str()) {
            return Err(CsvError::DuplicateColumn {
                line: header.line,
                name: n.clone(),
            });
        }
    }

    let na: HashSet<&str> = options.na_tokens.iter().map(String::as_str).collect();
    let mut raw: Vec<Vec<Option<String>>> = vec![Vec::new(); names.len()];
    let mut nrows = 0;
    for rec in records {
        if rec.fields.len() != names.len() {
            return Err(CsvError::RaggedRow {
                line: rec.line,
                expected: names.len(),
                found: rec.fields.len(),
            });
        }
        for (col, f) in raw.iter_mut().zip(rec.fields) {
            col.push(if !f.quoted && na.contains(f.text.as_str()) {
                None
            } else {
                Some(f.text)
            });
        }
        nrows += 1;
    }

    let columns = names
        .into_iter()
        .zip(raw)
        .map(|(n, tokens)| Column::new(n, column_from_tokens(tokens)))
        .collect();
    // Names were checked above and every column has exactly one token per record.
    Ok(Table::with_rows(name, columns, nrows).expect("consistent table"))
}

/// Reads a CSV file. The table is named after the file stem.
pub fn read_csv(path: impl AsRef<Path>, options: &CsvOptions) -> Result<Table, CsvError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| CsvError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    read_csv_str(&name, &text, options)
}

fn needs_quotes(s: &str, options: &CsvOptions) -> bool {
    s.is_empty()
        || options.na_tokens.iter().any(|t| t == s)
        || s.bytes()
            .any(|b| b == options.delimiter || matches!(b, b'"' | b'\n' | b'\r'))
}

fn push_field(out: &mut String, s: &str, force_quotes: bool) {
    if force_quotes {
        out.push('"');
        out.push_str(&s.replace('"', "\"\""));
        out.push('"');
    } else {
        out.push_str(s);
    }
}

/// Renders a float so that it re-reads as a float, never as an integer.
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

/// Serialises a table so that [`read_csv_str`] yields an equal table.
pub fn write_csv_string(table: &Table, options: &CsvOptions) -> String {
    let delim = char::from(options.delimiter);
    let mut out = String::new();
    for (i, c) in table.columns().iter().enumerate() {
        if i > 0 {
            out.push(delim);
        }
        push_field(&mut out, c.name(), needs_quotes(c.name(), options));
    }
    out.push('\n');
    for row in 0..table.nrows() {
        for (i, c) in table.columns().iter().enumerate() {
            if i > 0 {
                out.push(delim);
            }
            match c.data() {
                ColumnData::Boolean(v) => {
                    if let Some(b) = v[row] {
                        out.push_str(if b { "true" } else { "false" });
                    }
                }
                ColumnData::Integer(v) => {
                    if let Some(x) = v[row] {
                        out.push_str(&x.to_string());
                    }
                }
                ColumnData::Float(v) => {
                    if let Some(x) = v[row] {
                        out.push_str(&format_float(x));
                    }
                }
                ColumnData::Temporal(v) => {
                    if let Some(x) = v[row] {
                        out.push_str(&format_timestamp(x));
                    }
                }
                ColumnData::Categorical(v) => {
                    if let Some(s) = &v[row] {
                        push_field(&mut out, s, needs_quotes(s, options));
                    }
                }
            }
        }
        out.push('\n');
    }
    out
}

pub fn write_csv(
    table: &Table,
    path: impl AsRef<Path>,
    options: &CsvOptions,
) -> Result<(), CsvError> {
    let path = path.as_ref();
    fs::write(path, write_csv_string(table, options)).map_err(|source| CsvError::Io {
        path: path.display().to_string(),
        source,
    })
}
