//! Seeded random columns with a mix of shapes: small-range integers with many
//! repeats, heavy-tailed floats with planted extremes, constants, all-null.

use rand::rngs::StdRng;
use rand::Rng;

fn normal(rng: &mut StdRng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// A numeric column (as f64 cells) and whether every value is integral.
pub fn numeric_column(rng: &mut StdRng, max_len: usize) -> (Vec<Option<f64>>, bool) {
    let n = rng.gen_range(0..=max_len);
    let null_p = [0.0, 0.0, 0.05, 0.3, 0.9, 1.0][rng.gen_range(0..6)];
    let shape = rng.gen_range(0..6);
    let centre = rng.gen_range(-1000.0..1000.0);
    let scale = 10f64.powi(rng.gen_range(-3..5));
    let integral = matches!(shape, 0 | 1 | 4);
    let constant = rng.gen_range(-50..50) as f64;
    let mut cells = Vec::with_capacity(n);
    for _ in 0..n {
        if rng.gen_bool(null_p) {
            cells.push(None);
            continue;
        }
        let v = match shape {
            0 => rng.gen_range(-5..=5) as f64,
            1 => rng.gen_range(-1_000_000i64..=1_000_000) as f64,
            2 => centre + scale * normal(rng),
            3 => {
                let x = centre + scale * normal(rng);
                if rng.gen_bool(0.02) {
                    x + scale * rng.gen_range(5.0..50.0) * if rng.gen() { 1.0 } else { -1.0 }
                } else {
                    x
                }
            }
            4 => constant,
            _ => rng.gen_range(0.0..1.0) * scale,
        };
        cells.push(Some(v));
    }
    if shape == 1 && !cells.is_empty() && rng.gen_bool(0.5) {
        cells.sort_by(|a, b| a.partial_cmp(b).unwrap());
    }
    (cells, integral)
}

pub fn string_column(rng: &mut StdRng, max_len: usize) -> Vec<Option<String>> {
    let n = rng.gen_range(0..=max_len);
    let alphabet = rng.gen_range(1..40usize);
    let null_p = [0.0, 0.1, 0.5][rng.gen_range(0..3)];
    let unique = rng.gen_bool(0.15);
    (0..n)
        .map(|i| {
            if rng.gen_bool(null_p) {
                None
            } else if unique {
                Some(format!("id{i}"))
            } else {
                let k = rng.gen_range(0..alphabet);
                Some(match k % 4 {
                    0 => format!("v{k}"),
                    1 => "---".repeat(1 + k % 3),
                    2 => format!("Ünï{k}"),
                    _ => format!("city {k}"),
                })
            }
        })
        .collect()
}
