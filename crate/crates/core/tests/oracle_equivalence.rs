mod common;

use common::{check, gen, oracle};
use liveprof_core::profile::temporal::temporal_profile;
use liveprof_core::session::duplicated_flags;
use liveprof_core::ColumnData;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const COLUMNS: usize = 1200;
const MAX_LEN: usize = 1000;

#[test]
fn numeric_columns_match_oracle() {
    let mut rng = StdRng::seed_from_u64(0x5EED_0001);
    for i in 0..COLUMNS {
        let (cells, _) = gen::numeric_column(&mut rng, MAX_LEN);
        let outcome = check::histogram(&cells)
            .and_then(|_| check::summary(&cells))
            .and_then(|_| check::outliers(&cells));
        if let Err(e) = outcome {
            panic!("column {i} (n = {}): {e}", cells.len());
        }
    }
}

#[test]
fn categorical_columns_match_oracle() {
    let mut rng = StdRng::seed_from_u64(0x5EED_0002);
    for i in 0..COLUMNS {
        let cells = gen::string_column(&mut rng, MAX_LEN);
        if let Err(e) = check::categorical(&cells) {
            panic!("column {i} (n = {}): {e}", cells.len());
        }
    }
}

#[test]
fn duplicated_marks_every_group_member() {
    let mut rng = StdRng::seed_from_u64(0x5EED_0003);
    for _ in 0..300 {
        let cells = gen::string_column(&mut rng, 200);
        let flags = duplicated_flags(&ColumnData::Categorical(cells.clone()));
        let rows: Vec<usize> = (0..flags.len()).filter(|&i| flags[i]).collect();
        assert_eq!(rows, oracle::duplicate_members(&cells));
    }
}

#[test]
fn temporal_histogram_matches_scan() {
    let mut rng = StdRng::seed_from_u64(0x5EED_0004);
    for _ in 0..300 {
        let n = rng.gen_range(0..=MAX_LEN);
        let base = rng.gen_range(0..1_600_000_000_000i64);
        let span = rng.gen_range(1..10_000_000_000i64);
        let cells: Vec<Option<i64>> = (0..n)
            .map(|_| rng.gen_bool(0.9).then(|| base + rng.gen_range(0..span)))
            .collect();
        let t = temporal_profile(&cells);
        let values: Vec<f64> = cells.iter().flatten().map(|&v| v as f64).collect();
        assert_eq!(t.histogram.counts.len(), oracle::expected_bins(&values, 100));
        if values.is_empty() {
            assert_eq!(t.t_min, None);
            continue;
        }
        assert_eq!(t.histogram.counts, oracle::bin_counts(&values, &t.histogram.bin_edges));
        assert_eq!(t.t_min, cells.iter().flatten().min().copied());
        assert_eq!(t.t_max, cells.iter().flatten().max().copied());
    }
}

#[test]
fn hand_checked_cases() {
    let cells: Vec<Option<f64>> = [1., 2., 3., 4., 5., 6., 7., 8., 100.].map(Some).to_vec();
    assert_eq!(oracle::iqr_rows(&cells, 1.5), vec![8]);
    check::outliers(&cells).unwrap();
    let cells: Vec<Option<f64>> = [0., 0., 0., 0., 100.].map(Some).to_vec();
    assert!(oracle::sigma_rows(&cells, 3.0).is_empty());
    check::outliers(&cells).unwrap();
    for n in 0..=4 {
        // Every column over {-1, 0, 3, 50, null} up to length 4.
        let alphabet = [Some(-1.0), Some(0.0), Some(3.0), Some(50.0), None];
        let total = alphabet.len().pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let cells: Vec<Option<f64>> = (0..n)
                .map(|_| {
                    let v = alphabet[c % alphabet.len()];
                    c /= alphabet.len();
                    v
                })
                .collect();
            check::outliers(&cells).unwrap();
            check::summary(&cells).unwrap();
            check::histogram(&cells).unwrap();
        }
    }
}
