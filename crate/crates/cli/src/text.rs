//! Plain-text rendering of profiles for the terminal.

use std::fmt::Write;

use liveprof_core::csv::format_float;
use liveprof_core::infer::format_timestamp;
use liveprof_core::profile::ProfileBody;
use liveprof_core::{ColumnProfile, TableProfile};

const BAR_WIDTH: usize = 40;

fn num(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else if x.abs() >= 1e-3 && x.abs() < 1e9 {
        format!("{x:.4}").trim_end_matches('0').to_owned()
    } else {
        format_float(x)
    }
}

/// `name: N rows × M cols`
pub fn shape_line(p: &TableProfile) -> String {
    format!("{}: {} rows × {} cols", p.table_name, p.nrows, p.ncols)
}

fn column_summary(c: &ColumnProfile) -> String {
    match &c.body {
        ProfileBody::Numeric { summary: s, .. } if s.empty => "no values".into(),
        ProfileBody::Numeric { summary: s, .. } => format!(
            "min {} | median {} | mean {} | max {} | outliers {}σ/{}iqr",
            num(s.min),
            num(s.median),
            num(s.mean),
            num(s.max),
            s.outliers_sigma,
            s.outliers_iqr
        ),
        ProfileBody::Categorical(s) => {
            let top = s
                .top_values
                .first()
                .map(|v| format!(" | top {:?} ×{}", v.value, v.count))
                .unwrap_or_default();
            let dup = if s.is_unique {
                "unique".to_owned()
            } else {
                format!("{} dup", s.duplicate_rows)
            };
            format!("{} distinct | {dup}{top}", s.cardinality)
        }
        ProfileBody::Temporal(s) => match (s.t_min, s.t_max) {
            (Some(a), Some(b)) => format!("{} → {}", format_timestamp(a), format_timestamp(b)),
            _ => "no values".into(),
        },
    }
}

/// Shape line followed by one aligned row per column.
pub fn profile_table_text(p: &TableProfile) -> String {
    let mut out = shape_line(p);
    out.push('\n');
    let w = p.columns.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
    for c in &p.columns {
        let _ = writeln!(
            out,
            "  {:<w$}  {:<11}  {:>6.1}% null  {}",
            c.name,
            c.stype.as_str(),
            c.null_fraction * 100.0,
            column_summary(c),
        );
    }
    out
}

fn bars(rows: &[(String, u64)]) -> String {
    let max = rows.iter().map(|r| r.1).max().unwrap_or(0).max(1);
    let w = rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (label, count) in rows {
        let len = (*count as usize * BAR_WIDTH).div_ceil(max as usize);
        let _ = writeln!(out, "  {label:>w$} | {} {count}", "█".repeat(len));
    }
    out
}

/// Text chart for one column: histogram bins, top values or a timeline.
pub fn plot_text(c: &ColumnProfile) -> String {
    let rows: Vec<(String, u64)> = match &c.body {
        ProfileBody::Numeric { histogram: h, .. } => (0..h.bins())
            .map(|i| {
                let (lo, hi, last) = h.bin_bounds(i).expect("bin");
                (
                    format!("[{}, {}{}", num(lo), num(hi), if last { "]" } else { ")" }),
                    h.counts[i],
                )
            })
            .collect(),
        ProfileBody::Categorical(s) => s
            .top_values
            .iter()
            .map(|v| (format!("{:?}", v.value), v.count as u64))
            .collect(),
        ProfileBody::Temporal(s) => (0..s.histogram.bins())
            .map(|i| {
                let (lo, _, _) = s.histogram.bin_bounds(i).expect("bin");
                (format_timestamp(lo as i64), s.histogram.counts[i])
            })
            .collect(),
    };
    format!("{} ({})\n{}", c.name, c.stype.as_str(), bars(&rows))
}
