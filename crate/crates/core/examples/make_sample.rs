//! Regenerates `data/synthetic.csv`.
//!
//!     cargo run -p knn-core --example make_sample > crates/core/data/synthetic.csv

use knn_core::synthetic::{linear_sample_csv, BUNDLED_ROWS, BUNDLED_SEED};

fn main() {
    print!("{}", linear_sample_csv(BUNDLED_ROWS, BUNDLED_SEED));
}
