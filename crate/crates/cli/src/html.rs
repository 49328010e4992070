//! Static HTML rendering of a snapshot. The page carries the same fields as
//! the JSON payload and uses no script.

use std::fmt::Write;

use liveprof_core::csv::format_float;
use liveprof_core::infer::format_timestamp;
use liveprof_core::profile::histogram::Histogram;
use liveprof_core::profile::ProfileBody;
use liveprof_core::{ColumnProfile, TableProfile};
use liveprof_server::Snapshot;

const STYLE: &str = "body{font:14px/1.4 system-ui,sans-serif;margin:2em;color:#222}\
section.table{margin-bottom:2em}section.column{border:1px solid #ddd;padding:.5em 1em;margin:.5em 0}\
table{border-collapse:collapse}td,th{padding:1px 8px;text-align:left}th{color:#555;font-weight:normal}\
svg rect{fill:#7a9cc6}.meta{color:#666}";

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

fn svg_bars(counts: &[u64], labels: &[String]) -> String {
    const W: f64 = 480.0;
    const H: f64 = 60.0;
    let max = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    let bw = W / counts.len().max(1) as f64;
    let mut s = format!(r#"<svg width="{W}" height="{H}" role="img">"#);
    for (i, (&c, label)) in counts.iter().zip(labels).enumerate() {
        let h = c as f64 / max * H;
        let _ = write!(
            s,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}"><title>{}: {c}</title></rect>"#,
            i as f64 * bw,
            H - h,
            (bw - 1.0).max(1.0),
            h,
            escape(label)
        );
    }
    s.push_str("</svg>");
    s
}

fn bin_labels(h: &Histogram, fmt: impl Fn(f64) -> String) -> Vec<String> {
    (0..h.bins())
        .map(|i| {
            let (lo, hi, last) = h.bin_bounds(i).expect("bin");
            format!("[{}, {}{}", fmt(lo), fmt(hi), if last { "]" } else { ")" })
        })
        .collect()
}

fn rows(out: &mut String, pairs: &[(&str, String)]) {
    out.push_str("<table>");
    for (k, v) in pairs {
        let _ = write!(out, "<tr><th>{}</th><td>{}</td></tr>", k, escape(v));
    }
    out.push_str("</table>");
}

fn column(out: &mut String, c: &ColumnProfile) {
    let _ = write!(
        out,
        r#"<section class="column"><h3>{}</h3><p class="meta">{} · {} null ({}%)</p>"#,
        escape(&c.name),
        c.stype.as_str(),
        c.n_null,
        format_float(c.null_fraction * 100.0)
    );
    match &c.body {
        ProfileBody::Numeric { histogram, summary: s } => {
            out.push_str(&svg_bars(&histogram.counts, &bin_labels(histogram, format_float)));
            let f = |x: f64| if s.empty { "-".to_owned() } else { format_float(x) };
            rows(
                out,
                &[
                    ("min", f(s.min)),
                    ("q1", f(s.q1)),
                    ("median", f(s.median)),
                    ("q3", f(s.q3)),
                    ("max", f(s.max)),
                    ("mean", f(s.mean)),
                    ("std", f(s.std)),
                    ("positive / zero / negative", format!("{} / {} / {}", s.n_pos, s.n_zero, s.n_neg)),
                    ("sortedness", s.sortedness.as_str().to_owned()),
                    ("outliers (3σ)", s.outliers_sigma.to_string()),
                    ("outliers (1.5·IQR)", s.outliers_iqr.to_string()),
                ],
            );
        }
        ProfileBody::Categorical(s) => {
            let counts: Vec<u64> = s.top_values.iter().map(|v| v.count as u64).collect();
            let labels: Vec<String> = s.top_values.iter().map(|v| v.value.clone()).collect();
            out.push_str(&svg_bars(&counts, &labels));
            out.push_str("<table>");
            for v in &s.top_values {
                let _ = write!(out, "<tr><td>{}</td><td>{}</td></tr>", escape(&v.value), v.count);
            }
            out.push_str("</table>");
            rows(
                out,
                &[
                    ("distinct", s.cardinality.to_string()),
                    ("duplicate rows", s.duplicate_rows.to_string()),
                    ("unique", s.is_unique.to_string()),
                    (
                        "string length min / mean / max",
                        format!("{} / {} / {}", s.strlen_min, format_float(s.strlen_mean), s.strlen_max),
                    ),
                ],
            );
        }
        ProfileBody::Temporal(s) => {
            let labels = bin_labels(&s.histogram, |x| format_timestamp(x as i64));
            out.push_str(&svg_bars(&s.histogram.counts, &labels));
            let t = |x: Option<i64>| x.map_or("-".to_owned(), format_timestamp);
            rows(
                out,
                &[
                    ("first", t(s.t_min)),
                    ("last", t(s.t_max)),
                    ("sortedness", s.sortedness.as_str().to_owned()),
                ],
            );
        }
    }
    out.push_str("</section>");
}

fn table(out: &mut String, p: &TableProfile) {
    let _ = write!(
        out,
        r#"<section class="table"><h2>{}</h2><p class="meta">{} rows × {} cols · epoch {} · fingerprint {}{}</p>"#,
        escape(&p.table_name),
        p.nrows,
        p.ncols,
        p.epoch,
        p.fingerprint,
        if p.temporary { " · temporary" } else { "" }
    );
    for c in &p.columns {
        column(out, c);
    }
    out.push_str("</section>");
}

pub fn render(snapshot: &Snapshot) -> String {
    let title = snapshot
        .order
        .first()
        .map_or("profile report".to_owned(), |n| format!("{n} profile"));
    let mut out = format!(
        "<!doctype html>\n<html lang=\"en\"><head><meta charset=\"utf-8\"><title>{}</title><style>{STYLE}</style></head><body>",
        escape(&title)
    );
    for p in &snapshot.profiles {
        table(&mut out, p);
    }
    out.push_str("</body></html>\n");
    out
}
