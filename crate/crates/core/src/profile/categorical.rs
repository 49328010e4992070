use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub const TOP_K: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueCount {
    pub value: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoricalSummary {
    pub cardinality: usize,
    pub top_values: Vec<ValueCount>,
    pub n_null: usize,
    pub duplicate_rows: usize,
    pub is_unique: bool,
    pub strlen_min: usize,
    pub strlen_mean: f64,
    pub strlen_max: usize,
}

/// Frequency summary over string renderings of the non-null cells. Top values
/// are ordered by count descending, then value ascending.
pub fn categorical_profile<'a>(
    cells: impl IntoIterator<Item = Option<&'a str>>,
    k: usize,
) -> CategoricalSummary {
    let mut freq: HashMap<&str, usize> = HashMap::new();
    let mut n_null = 0;
    let mut n = 0usize;
    let mut len_sum = 0usize;
    let mut len_min = usize::MAX;
    let mut len_max = 0;
    for cell in cells {
        match cell {
            None => n_null += 1,
            Some(s) => {
                n += 1;
                *freq.entry(s).or_default() += 1;
                let len = s.chars().count();
                len_sum += len;
                len_min = len_min.min(len);
                len_max = len_max.max(len);
            }
        }
    }
    let mut ranked: Vec<(&str, usize)> = freq.iter().map(|(k, v)| (*k, *v)).collect();
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.truncate(k);
    let cardinality = freq.len();
    CategoricalSummary {
        cardinality,
        top_values: ranked
            .into_iter()
            .map(|(value, count)| ValueCount {
                value: value.to_owned(),
                count,
            })
            .collect(),
        n_null,
        duplicate_rows: n - cardinality,
        is_unique: n == cardinality,
        strlen_min: if n == 0 { 0 } else { len_min },
        strlen_mean: if n == 0 { 0.0 } else { len_sum as f64 / n as f64 },
        strlen_max: len_max,
    }
}

/// Boolean cells rendered as `"true"` / `"false"`.
pub fn boolean_profile(cells: &[Option<bool>], k: usize) -> CategoricalSummary {
    categorical_profile(
        cells
            .iter()
            .map(|c| c.map(|b| if b { "true" } else { "false" })),
        k,
    )
}
