//! Compares library results against the oracle, returning a description of
//! the first mismatch.

use liveprof_core::profile::categorical::{categorical_profile, TOP_K};
use liveprof_core::profile::histogram::{numeric_histogram, NUMERIC_MAX_BINS};
use liveprof_core::profile::stats::{
    numeric_summary, outliers_iqr, outliers_sigma, DEFAULT_IQR_K, DEFAULT_SIGMA_K,
};

use super::oracle;

fn float(field: &str, got: f64, want: f64) -> Result<(), String> {
    if oracle::close(got, want) {
        Ok(())
    } else {
        Err(format!("{field}: got {got:?}, oracle {want:?}"))
    }
}

fn exact<T: PartialEq + std::fmt::Debug>(field: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{field}: got {got:?}, oracle {want:?}"))
    }
}

pub fn histogram(cells: &[Option<f64>]) -> Result<(), String> {
    let values = oracle::non_null(cells);
    let h = numeric_histogram(cells);
    exact("n_null", h.n_null, cells.len() - values.len())?;
    let bins = oracle::expected_bins(&values, NUMERIC_MAX_BINS);
    exact("bins", h.counts.len(), bins)?;
    if bins == 0 {
        return exact("edges", h.bin_edges.len(), 0);
    }
    exact("edges len", h.bin_edges.len(), bins + 1)?;
    let s = oracle::sorted(&values);
    let (min, max) = (s[0], s[s.len() - 1]);
    exact("first edge", h.bin_edges[0], min)?;
    exact("last edge", h.bin_edges[bins], max)?;
    for (i, e) in h.bin_edges.iter().enumerate() {
        let want = min + (max - min) * i as f64 / bins as f64;
        float(&format!("edge {i}"), *e, want)?;
    }
    exact("counts", h.counts.clone(), oracle::bin_counts(&values, &h.bin_edges))?;
    exact("sum", h.counts.iter().sum::<u64>(), values.len() as u64)
}

pub fn summary(cells: &[Option<f64>]) -> Result<(), String> {
    let values = oracle::non_null(cells);
    let s = numeric_summary(cells);
    exact("n_nonnull", s.n_nonnull, values.len())?;
    exact("n_pos", s.n_pos, values.iter().filter(|v| **v > 0.0).count())?;
    exact("n_zero", s.n_zero, values.iter().filter(|v| **v == 0.0).count())?;
    exact("n_neg", s.n_neg, values.iter().filter(|v| **v < 0.0).count())?;
    exact("sortedness", s.sortedness.as_str(), oracle::sortedness(&values))?;
    if values.is_empty() {
        return exact("empty", s.empty, true);
    }
    let sorted = oracle::sorted(&values);
    float("min", s.min, sorted[0])?;
    float("max", s.max, sorted[sorted.len() - 1])?;
    float("q1", s.q1, oracle::quantile(&sorted, 0.25))?;
    float("median", s.median, oracle::quantile(&sorted, 0.5))?;
    float("q3", s.q3, oracle::quantile(&sorted, 0.75))?;
    float("mean", s.mean, oracle::mean(&values))?;
    float("std", s.std, oracle::std(&values))?;
    exact("outliers_sigma", s.outliers_sigma, oracle::sigma_rows(cells, 3.0).len())?;
    exact("outliers_iqr", s.outliers_iqr, oracle::iqr_rows(cells, 1.5).len())
}

pub fn outliers(cells: &[Option<f64>]) -> Result<(), String> {
    exact(
        "sigma rows",
        outliers_sigma(cells, DEFAULT_SIGMA_K).rows,
        oracle::sigma_rows(cells, 3.0),
    )?;
    exact(
        "iqr rows",
        outliers_iqr(cells, DEFAULT_IQR_K).rows,
        oracle::iqr_rows(cells, 1.5),
    )
}

pub fn categorical(cells: &[Option<String>]) -> Result<(), String> {
    let values: Vec<String> = cells.iter().flatten().cloned().collect();
    let c = categorical_profile(cells.iter().map(|c| c.as_deref()), TOP_K);
    let top: Vec<(String, usize)> = c
        .top_values
        .iter()
        .map(|v| (v.value.clone(), v.count))
        .collect();
    exact("top_values", top, oracle::top_k(&values, 10))?;
    let card = oracle::cardinality(&values);
    exact("cardinality", c.cardinality, card)?;
    exact("n_null", c.n_null, cells.len() - values.len())?;
    exact("duplicate_rows", c.duplicate_rows, values.len() - card)?;
    exact("is_unique", c.is_unique, values.len() == card)?;
    let lens: Vec<usize> = values.iter().map(|v| v.chars().count()).collect();
    exact("strlen_min", c.strlen_min, lens.iter().copied().min().unwrap_or(0))?;
    exact("strlen_max", c.strlen_max, lens.iter().copied().max().unwrap_or(0))?;
    let mean = if lens.is_empty() {
        0.0
    } else {
        lens.iter().sum::<usize>() as f64 / lens.len() as f64
    };
    float("strlen_mean", c.strlen_mean, mean)
}
