use serde::{Deserialize, Serialize};

use super::histogram::{equal_width, Histogram, TEMPORAL_MAX_BINS};
use super::stats::{sortedness, Sortedness};

/// Record counts over time. Bin edges are epoch milliseconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalSummary {
    pub histogram: Histogram,
    pub t_min: Option<i64>,
    pub t_max: Option<i64>,
    pub sortedness: Sortedness,
}

pub fn temporal_profile(cells: &[Option<i64>]) -> TemporalSummary {
    let values: Vec<i64> = cells.iter().flatten().copied().collect();
    let as_f64: Vec<f64> = values.iter().map(|&v| v as f64).collect();
    TemporalSummary {
        histogram: equal_width(&as_f64, cells.len() - values.len(), TEMPORAL_MAX_BINS),
        t_min: values.iter().min().copied(),
        t_max: values.iter().max().copied(),
        sortedness: sortedness(values.iter()),
    }
}
