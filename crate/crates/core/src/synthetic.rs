//! Seeded linear-plus-noise regression data.
//!
//! `y = 3 x1 - 2 x2 + 0.5 x3 + e` with `x_j ~ U[0, 10)` and `e ~ N(0, 1)`.
//! Values are rounded to six decimals so the CSV text and the in-memory
//! dataset agree exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::{ColumnKind, Dataset, Matrix, Schema};

/// Seed of the bundled `data/synthetic.csv`.
pub const BUNDLED_SEED: u64 = 20240229;
pub const BUNDLED_ROWS: usize = 200;

pub const FEATURES: [&str; 3] = ["x1", "x2", "x3"];
pub const TARGET: &str = "y";
const COEFFICIENTS: [f64; 3] = [3.0, -2.0, 0.5];
const NOISE_SD: f64 = 1.0;

fn rows(n: usize, seed: u64) -> Vec<[String; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, NOISE_SD).expect("valid sd");
    (0..n)
        .map(|_| {
            let x: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.0..10.0));
            let signal: f64 = x.iter().zip(COEFFICIENTS).map(|(a, b)| a * b).sum();
            let y = signal + noise.sample(&mut rng);
            [
                format!("{:.6}", x[0]),
                format!("{:.6}", x[1]),
                format!("{:.6}", x[2]),
                format!("{y:.6}"),
            ]
        })
        .collect()
}

/// CSV text with header `x1,x2,x3,y`.
pub fn linear_sample_csv(n: usize, seed: u64) -> String {
    let mut out = format!("{},{}\n", FEATURES.join(","), TARGET);
    for r in rows(n, seed) {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

pub fn linear_sample(n: usize, seed: u64) -> Dataset {
    let parse = |s: &String| s.parse::<f64>().expect("generated number");
    let (mut features, mut target) = (Vec::with_capacity(3 * n), Vec::with_capacity(n));
    for r in rows(n, seed) {
        features.extend(r[..3].iter().map(parse));
        target.push(parse(&r[3]));
    }
    let schema = Schema::new(
        FEATURES.iter().map(|s| s.to_string()).collect(),
        vec![ColumnKind::Numeric; 3],
    )
    .expect("distinct names");
    let features = Matrix::new(n, 3, features).expect("shape");
    Dataset::new(features, target, schema, TARGET).expect("finite values")
}
