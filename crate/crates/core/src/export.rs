//! Snippet generation for selection and template exports.
//!
//! Every snippet is a single DSL statement built from a fixed template with
//! table and column names substituted. Generation reads the session and
//! never modifies it; the caller decides whether to execute the text.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::{format_number, quote_ident, quote_str};
use crate::infer::parse_bool_token;
use crate::session::{plot_kind_for, Session};
use crate::table::{Column, SemanticType, Table};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExportRequest {
    /// `value: null` selects the null cells.
    CatValue {
        table: String,
        column: String,
        value: Option<String>,
    },
    NumRange {
        table: String,
        column: String,
        lo: f64,
        hi: f64,
        #[serde(default)]
        last_bin: bool,
    },
    OutliersSigma {
        table: String,
        column: String,
    },
    OutliersIqr {
        table: String,
        column: String,
    },
    Duplicates {
        table: String,
        column: String,
    },
    Plot {
        table: String,
        column: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snippet {
    pub text: String,
    /// Binding the snippet creates, if any.
    pub new_name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExportError {
    #[error("unknown table `{0}`")]
    UnknownTable(String),
    #[error("unknown column `{column}` in table `{table}`")]
    UnknownColumn { table: String, column: String },
    #[error("column `{column}` is {actual}, expected {expected}")]
    ColumnType {
        column: String,
        actual: SemanticType,
        expected: &'static str,
    },
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("`{value}` is not a value of boolean column `{column}`")]
    InvalidValue { column: String, value: String },
}

impl ExportError {
    /// Stable identifier used in protocol error messages.
    pub fn kind(&self) -> &'static str {
        match self {
            ExportError::UnknownTable(_) => "UnknownTable",
            ExportError::UnknownColumn { .. } => "UnknownColumn",
            ExportError::ColumnType { .. } => "ColumnType",
            ExportError::InvalidRange { .. } => "InvalidRange",
            ExportError::InvalidValue { .. } => "InvalidValue",
        }
    }
}

fn resolve<'a>(
    session: &'a Session,
    table: &str,
    column: &str,
) -> Result<(&'a Table, &'a Column), ExportError> {
    let t = session
        .table(table)
        .ok_or_else(|| ExportError::UnknownTable(table.to_owned()))?;
    let c = t.column(column).ok_or_else(|| ExportError::UnknownColumn {
        table: table.to_owned(),
        column: column.to_owned(),
    })?;
    Ok((t, c))
}

fn require_numeric(c: &Column) -> Result<(), ExportError> {
    if c.stype().is_numeric() {
        Ok(())
    } else {
        Err(ExportError::ColumnType {
            column: c.name().to_owned(),
            actual: c.stype(),
            expected: "numeric",
        })
    }
}

/// `{table}{suffix}`, or the first free `{table}{suffix}_N` for N = 2, 3, ...
fn fresh_name(session: &Session, table: &str, suffix: &str) -> String {
    let base = format!("{table}{suffix}");
    if session.table(&base).is_none() {
        return base;
    }
    (2..)
        .map(|n| format!("{base}_{n}"))
        .find(|name| session.table(name).is_none())
        .expect("unbounded search")
}

fn filter_snippet(session: &Session, table: &str, suffix: &str, predicate: String) -> Snippet {
    let name = fresh_name(session, table, suffix);
    Snippet {
        text: format!(
            "{} = filter {} where {}",
            quote_ident(&name),
            quote_ident(table),
            predicate
        ),
        new_name: Some(name),
    }
}

pub fn export_categorical_selection(
    session: &Session,
    table: &str,
    column: &str,
    value: Option<&str>,
) -> Result<Snippet, ExportError> {
    let (_, c) = resolve(session, table, column)?;
    let col = quote_ident(column);
    let predicate = match (c.stype(), value) {
        (_, None) => format!("isnull({col})"),
        (SemanticType::Categorical, Some(v)) => format!("{col} == {}", quote_str(v)),
        (SemanticType::Boolean, Some(v)) => {
            let b = parse_bool_token(v).ok_or_else(|| ExportError::InvalidValue {
                column: column.to_owned(),
                value: v.to_owned(),
            })?;
            format!("{col} == {b}")
        }
        (actual, Some(_)) => {
            return Err(ExportError::ColumnType {
                column: column.to_owned(),
                actual,
                expected: "categorical or boolean",
            })
        }
    };
    Ok(filter_snippet(session, table, "_sel", predicate))
}

/// Selects `lo <= v < hi`, or `lo <= v <= hi` for the last (closed) bin and
/// for a degenerate single-value bin.
pub fn export_numeric_range(
    session: &Session,
    table: &str,
    column: &str,
    lo: f64,
    hi: f64,
    last_bin: bool,
) -> Result<Snippet, ExportError> {
    let (_, c) = resolve(session, table, column)?;
    require_numeric(c)?;
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(ExportError::InvalidRange { lo, hi });
    }
    let col = quote_ident(column);
    let upper = if last_bin || lo == hi { "<=" } else { "<" };
    let predicate = format!(
        "{col} >= {} and {col} {upper} {}",
        format_number(lo),
        format_number(hi)
    );
    Ok(filter_snippet(session, table, "_sel", predicate))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutlierMethod {
    Sigma,
    Iqr,
}

pub fn export_outlier_template(
    session: &Session,
    table: &str,
    column: &str,
    method: OutlierMethod,
) -> Result<Snippet, ExportError> {
    let (_, c) = resolve(session, table, column)?;
    require_numeric(c)?;
    let col = quote_ident(column);
    let qualified = format!("{}.{}", quote_ident(table), col);
    let predicate = match method {
        OutlierMethod::Sigma => format!(
            "{col} < mean({qualified}) - 3 * std({qualified}) or {col} > mean({qualified}) + 3 * std({qualified})"
        ),
        OutlierMethod::Iqr => format!(
            "{col} < quantile({qualified}, 0.25) - 1.5 * iqr({qualified}) or {col} > quantile({qualified}, 0.75) + 1.5 * iqr({qualified})"
        ),
    };
    Ok(filter_snippet(session, table, "_out", predicate))
}

pub fn export_duplicates_template(
    session: &Session,
    table: &str,
    column: &str,
) -> Result<Snippet, ExportError> {
    resolve(session, table, column)?;
    let predicate = format!("duplicated({})", quote_ident(column));
    Ok(filter_snippet(session, table, "_dups", predicate))
}

pub fn export_plot_template(
    session: &Session,
    table: &str,
    column: &str,
) -> Result<Snippet, ExportError> {
    let (_, c) = resolve(session, table, column)?;
    Ok(Snippet {
        text: format!(
            "plot {}.{} as {}",
            quote_ident(table),
            quote_ident(column),
            plot_kind_for(c.stype()).as_str()
        ),
        new_name: None,
    })
}

pub fn export(session: &Session, request: &ExportRequest) -> Result<Snippet, ExportError> {
    match request {
        ExportRequest::CatValue {
            table,
            column,
            value,
        } => export_categorical_selection(session, table, column, value.as_deref()),
        ExportRequest::NumRange {
            table,
            column,
            lo,
            hi,
            last_bin,
        } => export_numeric_range(session, table, column, *lo, *hi, *last_bin),
        ExportRequest::OutliersSigma { table, column } => {
            export_outlier_template(session, table, column, OutlierMethod::Sigma)
        }
        ExportRequest::OutliersIqr { table, column } => {
            export_outlier_template(session, table, column, OutlierMethod::Iqr)
        }
        ExportRequest::Duplicates { table, column } => {
            export_duplicates_template(session, table, column)
        }
        ExportRequest::Plot { table, column } => export_plot_template(session, table, column),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    fn session(csv: &str) -> (tempfile::TempDir, Session) {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("d.csv"), csv).unwrap();
        let mut s = Session::new().with_base_dir(dir.path());
        assert!(s.execute("load \"d.csv\" as df").ok);
        (dir, s)
    }

    #[test]
    fn categorical_text() {
        let (_d, s) = session("county,price\n---,1\nAlameda,2\n");
        let snip = export_categorical_selection(&s, "df", "county", Some("---")).unwrap();
        assert_eq!(snip.text, r#"df_sel = filter df where county == "---""#);
        assert_eq!(snip.new_name.as_deref(), Some("df_sel"));
        let snip = export_categorical_selection(&s, "df", "county", None).unwrap();
        assert_eq!(snip.text, "df_sel = filter df where isnull(county)");
    }

    #[test]
    fn numeric_range_text() {
        let (_d, s) = session("price\n0\n500\n10\n");
        assert_eq!(
            export_numeric_range(&s, "df", "price", 0.0, 500.0, false).unwrap().text,
            "df_sel = filter df where price >= 0 and price < 500"
        );
        assert_eq!(
            export_numeric_range(&s, "df", "price", 7.5, 10.0, true).unwrap().text,
            "df_sel = filter df where price >= 7.5 and price <= 10"
        );
        assert!(matches!(
            export_numeric_range(&s, "df", "price", 2.0, 1.0, false),
            Err(ExportError::InvalidRange { .. })
        ));
    }

    #[test]
    fn outlier_text_contains_editable_factors() {
        let (_d, s) = session("price\n1\n");
        let sigma = export_outlier_template(&s, "df", "price", OutlierMethod::Sigma).unwrap();
        assert_eq!(
            sigma.text,
            "df_out = filter df where price < mean(df.price) - 3 * std(df.price) or price > mean(df.price) + 3 * std(df.price)"
        );
        let iqr = export_outlier_template(&s, "df", "price", OutlierMethod::Iqr).unwrap();
        assert!(iqr.text.contains("1.5 * iqr(df.price)"));
        assert!(parse(&iqr.text).is_ok());
    }

    #[test]
    fn plot_dispatch() {
        let (_d, s) = session("price,county,d\n1,a,2020-01-01\n");
        assert_eq!(export_plot_template(&s, "df", "price").unwrap().text, "plot df.price as histogram");
        assert_eq!(export_plot_template(&s, "df", "county").unwrap().text, "plot df.county as topk");
        assert_eq!(export_plot_template(&s, "df", "d").unwrap().text, "plot df.d as timeline");
    }

    #[test]
    fn name_collisions_get_suffixes() {
        let (_d, mut s) = session("a\nx\n");
        assert!(s.execute("df_sel = df\ndf_sel_2 = df").ok);
        let snip = export_categorical_selection(&s, "df", "a", Some("x")).unwrap();
        assert_eq!(snip.new_name.as_deref(), Some("df_sel_3"));
    }

    #[test]
    fn awkward_names_are_quoted() {
        let (_d, s) = session("sale price,by\n1,\"say \"\"hi\"\"\"\n");
        let snip = export_numeric_range(&s, "df", "sale price", 1.0, 1.0, false).unwrap();
        assert_eq!(
            snip.text,
            "df_sel = filter df where `sale price` >= 1 and `sale price` <= 1"
        );
        let snip = export_categorical_selection(&s, "df", "by", Some("say \"hi\"")).unwrap();
        assert_eq!(snip.text, r#"df_sel = filter df where `by` == "say \"hi\"""#);
        assert!(parse(&snip.text).is_ok());
    }

    #[test]
    fn errors() {
        let (_d, s) = session("price,county\n1,a\n");
        assert_eq!(
            export_duplicates_template(&s, "nope", "price"),
            Err(ExportError::UnknownTable("nope".into()))
        );
        assert!(matches!(
            export_plot_template(&s, "df", "nope"),
            Err(ExportError::UnknownColumn { .. })
        ));
        assert!(matches!(
            export_outlier_template(&s, "df", "county", OutlierMethod::Sigma),
            Err(ExportError::ColumnType { .. })
        ));
        assert!(matches!(
            export_categorical_selection(&s, "df", "price", Some("1")),
            Err(ExportError::ColumnType { .. })
        ));
    }

    #[test]
    fn request_json_shape() {
        let req: ExportRequest = serde_json::from_str(
            r#"{"kind":"num_range","table":"df","column":"price","lo":0,"hi":5}"#,
        )
        .unwrap();
        assert_eq!(
            req,
            ExportRequest::NumRange {
                table: "df".into(),
                column: "price".into(),
                lo: 0.0,
                hi: 5.0,
                last_bin: false
            }
        );
    }
}
