//! Brute-force reference implementations. Deliberately naive: sorting,
//! scanning and counting with std collections only.

use std::collections::BTreeMap;

/// Relative tolerance for float comparisons, with an absolute floor of the
/// same size for values near zero.
pub const REL_TOL: f64 = 1e-9;

pub fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(1.0)
}

pub fn non_null(cells: &[Option<f64>]) -> Vec<f64> {
    cells.iter().filter_map(|c| *c).collect()
}

pub fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Linear interpolation between the order statistics around `(n-1)p`.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn mean(values: &[f64]) -> f64 {
    let mut s = 0.0;
    for v in values {
        s += v;
    }
    s / values.len() as f64
}

/// Sample standard deviation, 0 for fewer than two values.
pub fn std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let mut ss = 0.0;
    for v in values {
        ss += (v - m).powi(2);
    }
    (ss / (values.len() - 1) as f64).sqrt()
}

pub fn sigma_rows(cells: &[Option<f64>], k: f64) -> Vec<usize> {
    let vals = non_null(cells);
    if vals.is_empty() {
        return Vec::new();
    }
    let (m, s) = (mean(&vals), std(&vals));
    if s == 0.0 {
        return Vec::new();
    }
    let mut rows = Vec::new();
    for (i, c) in cells.iter().enumerate() {
        if let Some(v) = c {
            if (v - m).abs() > k * s {
                rows.push(i);
            }
        }
    }
    rows
}

pub fn iqr_rows(cells: &[Option<f64>], k: f64) -> Vec<usize> {
    let s = sorted(&non_null(cells));
    if s.is_empty() {
        return Vec::new();
    }
    let q1 = quantile(&s, 0.25);
    let q3 = quantile(&s, 0.75);
    let iqr = q3 - q1;
    let mut rows = Vec::new();
    for (i, c) in cells.iter().enumerate() {
        if let Some(v) = c {
            if *v < q1 - k * iqr || *v > q3 + k * iqr {
                rows.push(i);
            }
        }
    }
    rows
}

/// Expected bin count: 1 for at most one distinct value, else
/// `min(cap, ceil(sqrt(n)))`.
pub fn expected_bins(values: &[f64], cap: usize) -> usize {
    if values.is_empty() {
        return 0;
    }
    let s = sorted(values);
    if s[0] == s[s.len() - 1] {
        return 1;
    }
    let mut r = 0usize;
    while r * r < values.len() {
        r += 1;
    }
    r.min(cap)
}

/// Counts per bin by scanning every value against every bin.
pub fn bin_counts(values: &[f64], edges: &[f64]) -> Vec<u64> {
    let b = edges.len() - 1;
    let mut counts = vec![0u64; b];
    for (i, count) in counts.iter_mut().enumerate() {
        let last = i == b - 1;
        for &v in values {
            let inside = v >= edges[i] && if last { v <= edges[i + 1] } else { v < edges[i + 1] };
            if inside {
                *count += 1;
            }
        }
    }
    counts
}

/// `(value, count)` sorted by count desc, value asc, truncated to `k`.
pub fn top_k(values: &[String], k: usize) -> Vec<(String, usize)> {
    let mut freq: BTreeMap<&str, usize> = BTreeMap::new();
    for v in values {
        *freq.entry(v).or_insert(0) += 1;
    }
    let mut all: Vec<(String, usize)> = freq.into_iter().map(|(v, c)| (v.to_string(), c)).collect();
    all.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    all.truncate(k);
    all
}

pub fn cardinality(values: &[String]) -> usize {
    let mut v = values.to_vec();
    v.sort();
    v.dedup();
    v.len()
}

/// Rows whose value occurs more than once; nulls never count.
pub fn duplicate_members<T: PartialEq>(cells: &[Option<T>]) -> Vec<usize> {
    let mut rows = Vec::new();
    for (i, a) in cells.iter().enumerate() {
        let Some(a) = a else { continue };
        if cells
            .iter()
            .enumerate()
            .any(|(j, b)| j != i && b.as_ref() == Some(a))
        {
            rows.push(i);
        }
    }
    rows
}

/// "ascending", "descending" or "unsorted", ignoring nulls and allowing ties.
pub fn sortedness(values: &[f64]) -> &'static str {
    let asc = sorted(values);
    let mut desc = asc.clone();
    desc.reverse();
    if values == asc.as_slice() {
        "ascending"
    } else if values == desc.as_slice() {
        "descending"
    } else {
        "unsorted"
    }
}
