use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dsl::{ParseError, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ErrorKind {
    ParseError,
    NameError,
    TypeError,
    CastError,
    IoError,
    CsvError,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorKind::ParseError => "ParseError",
            ErrorKind::NameError => "NameError",
            ErrorKind::TypeError => "TypeError",
            ErrorKind::CastError => "CastError",
            ErrorKind::IoError => "IoError",
            ErrorKind::CsvError => "CsvError",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
pub struct ExecError {
    pub kind: ErrorKind,
    pub message: String,
    pub span: Option<Span>,
}

impl fmt::Display for ExecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.span {
            Some(s) => write!(f, "{} at {}: {}", self.kind, s, self.message),
            None => write!(f, "{}: {}", self.kind, self.message),
        }
    }
}

impl ExecError {
    pub fn new(kind: ErrorKind, message: impl Into<String>, span: Option<Span>) -> Self {
        ExecError {
            kind,
            message: message.into(),
            span,
        }
    }

    pub fn name(message: impl Into<String>, span: Span) -> Self {
        Self::new(ErrorKind::NameError, message, Some(span))
    }

    pub fn type_error(message: impl Into<String>, span: Span) -> Self {
        Self::new(ErrorKind::TypeError, message, Some(span))
    }
}

impl From<ParseError> for ExecError {
    fn from(e: ParseError) -> Self {
        ExecError {
            kind: ErrorKind::ParseError,
            span: Some(e.span()),
            message: e.to_string(),
        }
    }
}
