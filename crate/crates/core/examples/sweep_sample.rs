//! Prints the default sweep over the bundled sample.

use knn_core::sweep::{run_sweep, SweepConfig};
use knn_core::Dataset;

fn main() -> Result<(), knn_core::Error> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/synthetic.csv");
    let data = Dataset::load_csv(path, "y", &[] as &[&str])?;
    let result = run_sweep(&data, &SweepConfig::default())?;
    for row in &result.rows {
        println!(
            "k={:>2} rmse={:.4} r2={:.4}",
            row.k,
            row.report.rmse,
            row.report.r_squared.unwrap_or(f64::NAN)
        );
    }
    println!("best k (rmse) = {}, best k (r2) = {:?}", result.best_k_rmse, result.best_k_r2);
    Ok(())
}
