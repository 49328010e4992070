//! Equal-width histograms over `[min, max]`.
//!
//! Bins are right-open except the last, which is closed. Bin membership is
//! decided by comparing against the stored edges, so a range filter built
//! from the edges selects exactly the counted values.

use serde::{Deserialize, Serialize};

pub const NUMERIC_MAX_BINS: usize = 40;
pub const TEMPORAL_MAX_BINS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub n_null: usize,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    /// `(lo, hi, last)` bounds of bin `i`.
    pub fn bin_bounds(&self, i: usize) -> Option<(f64, f64, bool)> {
        if i >= self.bins() {
            return None;
        }
        Some((self.bin_edges[i], self.bin_edges[i + 1], i + 1 == self.bins()))
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// `ceil(sqrt(n))` without going through floating point.
pub fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while r * r < n {
        r += 1;
    }
    r
}

/// Square-root rule capped at `max_bins`.
pub fn bin_count(n_nonnull: usize, max_bins: usize) -> usize {
    max_bins.min(ceil_sqrt(n_nonnull).max(1))
}

fn edges_for(min: f64, max: f64, bins: usize) -> Vec<f64> {
    let mut edges = Vec::with_capacity(bins + 1);
    for i in 0..bins {
        let t = i as f64 / bins as f64;
        // Interpolating from both ends avoids overflow of `max - min`.
        edges.push(if i == 0 { min } else { min * (1.0 - t) + max * t });
    }
    edges.push(max);
    edges
}

fn locate(edges: &[f64], v: f64) -> usize {
    let bins = edges.len() - 1;
    let (min, max) = (edges[0], edges[bins]);
    let guess = ((v - min) / (max - min) * bins as f64).floor();
    let mut i = if guess.is_finite() && guess > 0.0 {
        (guess as usize).min(bins - 1)
    } else {
        0
    };
    while i > 0 && v < edges[i] {
        i -= 1;
    }
    while i + 1 < bins && v >= edges[i + 1] {
        i += 1;
    }
    i
}

/// Bins the non-null `values` into at most `max_bins` equal-width bins.
pub fn equal_width(values: &[f64], n_null: usize, max_bins: usize) -> Histogram {
    let Some((min, max)) = super::stats::min_max(values) else {
        return Histogram {
            bin_edges: Vec::new(),
            counts: Vec::new(),
            n_null,
        };
    };
    if min == max {
        return Histogram {
            bin_edges: vec![min, max],
            counts: vec![values.len() as u64],
            n_null,
        };
    }
    let mut bins = bin_count(values.len(), max_bins);
    let mut edges = edges_for(min, max, bins);
    // Ranges only a few ulps wide cannot be split that finely.
    while bins > 1 && edges.windows(2).any(|w| w[0] >= w[1]) {
        bins -= 1;
        edges = edges_for(min, max, bins);
    }
    let mut counts = vec![0u64; bins];
    for &v in values {
        counts[locate(&edges, v)] += 1;
    }
    Histogram {
        bin_edges: edges,
        counts,
        n_null,
    }
}

/// Histogram for numeric cells with nulls.
pub fn numeric_histogram(cells: &[Option<f64>]) -> Histogram {
    let values: Vec<f64> = cells.iter().flatten().copied().collect();
    equal_width(&values, cells.len() - values.len(), NUMERIC_MAX_BINS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eleven_integers() {
        let cells: Vec<Option<f64>> = (0..=10).map(|x| Some(x as f64)).collect();
        let h = numeric_histogram(&cells);
        assert_eq!(h.bin_edges, vec![0.0, 2.5, 5.0, 7.5, 10.0]);
        assert_eq!(h.counts, vec![3, 2, 3, 3]);
    }

    #[test]
    fn degenerate_constant() {
        let h = numeric_histogram(&[Some(7.0), Some(7.0), Some(7.0)]);
        assert_eq!(h.bin_edges, vec![7.0, 7.0]);
        assert_eq!(h.counts, vec![3]);
    }

    #[test]
    fn nulls_excluded() {
        let h = numeric_histogram(&[Some(1.0), None, Some(2.0)]);
        assert_eq!(h.total(), 2);
        assert_eq!(h.n_null, 1);
    }

    #[test]
    fn all_null_has_no_bins() {
        let h = numeric_histogram(&[None, None]);
        assert_eq!(h.bins(), 0);
        assert!(h.bin_edges.is_empty());
        assert_eq!(h.n_null, 2);
    }

    #[test]
    fn bin_count_rule() {
        assert_eq!(bin_count(1, 40), 1);
        assert_eq!(bin_count(11, 40), 4);
        assert_eq!(bin_count(16, 40), 4);
        assert_eq!(bin_count(17, 40), 5);
        assert_eq!(bin_count(100_000, 40), 40);
        assert_eq!(bin_count(100_000, 100), 100);
    }

    #[test]
    fn extreme_range_does_not_overflow() {
        let h = equal_width(&[-f64::MAX, 0.0, f64::MAX, 1.0], 0, 40);
        assert_eq!(h.total(), 4);
        assert!(h.bin_edges.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*h.bin_edges.last().unwrap(), f64::MAX);
    }

    #[test]
    fn ulp_wide_range_collapses_bins() {
        let a = 1.0f64;
        let b = f64::from_bits(a.to_bits() + 1);
        let h = equal_width(&[a, b, a, b, a, b, a, b, a], 0, 40);
        assert!(h.bin_edges.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(h.total(), 9);
    }
}
