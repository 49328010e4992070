//! Scalar statistics over numeric cells: quantiles, moments, sortedness and
//! the two outlier heuristics.
//!
//! Nulls are skipped everywhere. The outlier tests are phrased exactly like
//! the exported DSL templates (`v < centre - k * spread or v > ...`) so that
//! evaluating a template reproduces these row sets bit for bit.

use serde::{Deserialize, Serialize};

use super::ProfileError;

pub const DEFAULT_SIGMA_K: f64 = 3.0;
pub const DEFAULT_IQR_K: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sortedness {
    Ascending,
    Descending,
    Unsorted,
}

impl Sortedness {
    pub fn as_str(self) -> &'static str {
        match self {
            Sortedness::Ascending => "ascending",
            Sortedness::Descending => "descending",
            Sortedness::Unsorted => "unsorted",
        }
    }
}

/// Type-7 quantile: linear interpolation at position `(n - 1) * p` of the
/// ascending `sorted` slice.
pub fn quantile(sorted: &[f64], p: f64) -> Result<f64, ProfileError> {
    if sorted.is_empty() {
        return Err(ProfileError::EmptyInput);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(ProfileError::InvalidProbability(p));
    }
    let pos = (sorted.len() - 1) as f64 * p;
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    if frac == 0.0 || lo + 1 >= sorted.len() {
        return Ok(sorted[lo]);
    }
    Ok(sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]))
}

/// Non-strict order of the non-null values as they appear. Fewer than two
/// values, or all values equal, count as ascending.
pub fn sortedness<T: PartialOrd>(values: impl IntoIterator<Item = T>) -> Sortedness {
    let mut asc = true;
    let mut desc = true;
    let mut prev: Option<T> = None;
    for v in values {
        if let Some(p) = &prev {
            asc &= *p <= v;
            desc &= *p >= v;
            if !asc && !desc {
                return Sortedness::Unsorted;
            }
        }
        prev = Some(v);
    }
    if asc {
        Sortedness::Ascending
    } else {
        Sortedness::Descending
    }
}

/// Mean and sample standard deviation (divisor n - 1). A constant sample
/// reports its value and zero spread exactly.
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    let n = values.len();
    if n == 0 {
        return None;
    }
    let (min, max) = min_max(values)?;
    if min == max {
        return Some((min, 0.0));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return Some((mean, 0.0));
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    Some((mean, (ss / (n - 1) as f64).sqrt()))
}

pub fn min_max(values: &[f64]) -> Option<(f64, f64)> {
    let first = *values.first()?;
    Some(
        values
            .iter()
            .fold((first, first), |(lo, hi), &v| (lo.min(v), hi.max(v))),
    )
}

pub fn sorted_copy(values: &[f64]) -> Vec<f64> {
    let mut s = values.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

/// First and third quartiles plus their difference.
pub fn quartiles(sorted: &[f64]) -> Option<(f64, f64, f64)> {
    let q1 = quantile(sorted, 0.25).ok()?;
    let q3 = quantile(sorted, 0.75).ok()?;
    Some((q1, q3, q3 - q1))
}

/// Rows flagged by an outlier heuristic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outliers {
    pub rows: Vec<usize>,
}

impl Outliers {
    pub fn count(&self) -> usize {
        self.rows.len()
    }
}

fn fenced(cells: &[Option<f64>], lower: f64, upper: f64) -> Outliers {
    Outliers {
        rows: cells
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.filter(|&v| v < lower || v > upper).map(|_| i))
            .collect(),
    }
}

fn non_null(cells: &[Option<f64>]) -> Vec<f64> {
    cells.iter().flatten().copied().collect()
}

/// Values farther than `k` sample standard deviations from the mean.
pub fn outliers_sigma(cells: &[Option<f64>], k: f64) -> Outliers {
    match mean_std(&non_null(cells)) {
        Some((mean, std)) => fenced(cells, mean - k * std, mean + k * std),
        None => Outliers::default(),
    }
}

/// Values below `q1 - k * IQR` or above `q3 + k * IQR`.
pub fn outliers_iqr(cells: &[Option<f64>], k: f64) -> Outliers {
    match quartiles(&sorted_copy(&non_null(cells))) {
        Some((q1, q3, iqr)) => fenced(cells, q1 - k * iqr, q3 + k * iqr),
        None => Outliers::default(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericSummary {
    /// True when the column has no non-null values; the float fields are then 0.
    pub empty: bool,
    pub n_nonnull: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
    pub std: f64,
    pub n_pos: usize,
    pub n_zero: usize,
    pub n_neg: usize,
    pub sortedness: Sortedness,
    pub outliers_sigma: usize,
    pub outliers_iqr: usize,
}

pub fn numeric_summary(cells: &[Option<f64>]) -> NumericSummary {
    let values = non_null(cells);
    let sorted = sorted_copy(&values);
    let sortedness = sortedness(values.iter());
    let (n_pos, n_zero, n_neg) = values.iter().fold((0, 0, 0), |(p, z, n), &v| {
        if v > 0.0 {
            (p + 1, z, n)
        } else if v < 0.0 {
            (p, z, n + 1)
        } else {
            (p, z + 1, n)
        }
    });
    let Some((mean, std)) = mean_std(&values) else {
        return NumericSummary {
            empty: true,
            n_nonnull: 0,
            min: 0.0,
            q1: 0.0,
            median: 0.0,
            q3: 0.0,
            max: 0.0,
            mean: 0.0,
            std: 0.0,
            n_pos,
            n_zero,
            n_neg,
            sortedness,
            outliers_sigma: 0,
            outliers_iqr: 0,
        };
    };
    let (q1, q3, iqr) = quartiles(&sorted).expect("non-empty");
    let count_outside = |lower: f64, upper: f64| {
        values.iter().filter(|&&v| v < lower || v > upper).count()
    };
    NumericSummary {
        empty: false,
        n_nonnull: values.len(),
        min: sorted[0],
        q1,
        median: quantile(&sorted, 0.5).expect("non-empty"),
        q3,
        max: sorted[sorted.len() - 1],
        mean,
        std,
        n_pos,
        n_zero,
        n_neg,
        sortedness,
        outliers_sigma: count_outside(mean - DEFAULT_SIGMA_K * std, mean + DEFAULT_SIGMA_K * std),
        outliers_iqr: count_outside(q1 - DEFAULT_IQR_K * iqr, q3 + DEFAULT_IQR_K * iqr),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cells(xs: &[f64]) -> Vec<Option<f64>> {
        xs.iter().copied().map(Some).collect()
    }

    #[test]
    fn quantile_examples() {
        assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0], 0.25).unwrap(), 1.75);
        for p in [0.0, 0.3, 1.0] {
            assert_eq!(quantile(&[5.0], p).unwrap(), 5.0);
        }
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 100.0];
        assert_eq!(quantile(&xs, 0.75).unwrap(), 7.0);
        assert_eq!(quantile(&xs, 0.25).unwrap(), 3.0);
        assert_eq!(quantile(&[], 0.5), Err(ProfileError::EmptyInput));
        assert!(quantile(&[1.0], 1.5).is_err());
    }

    #[test]
    fn constant_column_summary() {
        let s = numeric_summary(&cells(&[5.0, 5.0, 5.0]));
        for v in [s.min, s.q1, s.median, s.q3, s.max, s.mean] {
            assert_eq!(v, 5.0);
        }
        assert_eq!(s.std, 0.0);
        assert_eq!(s.n_pos, 3);
        assert_eq!(s.sortedness, Sortedness::Ascending);
        assert_eq!(s.outliers_sigma, 0);
        assert_eq!(s.outliers_iqr, 0);
    }

    #[test]
    fn constant_non_representable_mean_has_no_outliers() {
        let c = cells(&[0.1; 7]);
        assert_eq!(outliers_sigma(&c, 3.0).count(), 0);
        assert_eq!(mean_std(&[0.1; 7]), Some((0.1, 0.0)));
    }

    #[test]
    fn ties_are_still_ascending() {
        assert_eq!(sortedness([1.0, 2.0, 2.0, 3.0]), Sortedness::Ascending);
        assert_eq!(sortedness([3, 2, 2]), Sortedness::Descending);
        assert_eq!(sortedness([1, 3, 2]), Sortedness::Unsorted);
        assert_eq!(sortedness(Vec::<i32>::new()), Sortedness::Ascending);
    }

    #[test]
    fn sign_partition_skips_nulls() {
        let s = numeric_summary(&[Some(-1.0), Some(0.0), Some(2.0), None]);
        assert_eq!((s.n_neg, s.n_zero, s.n_pos), (1, 1, 1));
        assert_eq!(s.n_nonnull, 3);
    }

    #[test]
    fn sigma_threshold_not_exceeded() {
        let c = cells(&[0.0, 0.0, 0.0, 0.0, 100.0]);
        let (mean, std) = mean_std(&non_null(&c)).unwrap();
        assert_eq!(mean, 20.0);
        assert!((std - 2000f64.sqrt()).abs() < 1e-12);
        assert_eq!(outliers_sigma(&c, 3.0).count(), 0);
    }

    #[test]
    fn iqr_fences() {
        let c = cells(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 100.0]);
        assert_eq!(outliers_iqr(&c, 1.5).rows, vec![8]);
        assert_eq!(outliers_iqr(&cells(&[4.0; 6]), 1.5).count(), 0);
    }

    #[test]
    fn all_null_summary_is_flagged_empty() {
        let s = numeric_summary(&[None, None]);
        assert!(s.empty);
        assert_eq!(s.n_nonnull + s.n_pos + s.n_zero + s.n_neg, 0);
    }
}
