//! K-nearest-neighbors regression with exact neighbor search.
//!
//! The crate is organised bottom-up:
//!
//! - [`dataset`]: CSV ingestion, seeded train/test splits and z-score standardization.
//! - [`distance`]: euclidean, manhattan and hamming point distances.
//! - [`neighbors`]: exact k-nearest-neighbor search (brute force and kd-tree).
//! - [`regressor`]: the KNN regressor and the kNN density estimate `k / (n * V)`.
//! - [`metrics`]: SSE, MSE, RMSE, R-squared and the SSR/SST sums.
//! - [`sweep`]: metric-versus-k experiments with CSV tables and SVG charts.
//!
//! ```
//! use knn_core::{Dataset, KnnModel, KnnParams, ColumnKind};
//!
//! let train = Dataset::from_rows(
//!     vec!["x".into()],
//!     vec![ColumnKind::Numeric],
//!     &[vec![0.0], vec![10.0]],
//!     vec![10.0, 20.0],
//! )?;
//! let model = KnnModel::fit(&train, KnnParams::new(1))?;
//! assert_eq!(model.predict_one(&[1.0])?, 10.0);
//! # Ok::<(), knn_core::Error>(())
//! ```

pub mod dataset;
pub mod distance;
mod error;
pub mod metrics;
pub mod neighbors;
pub mod regressor;
pub mod sweep;
pub mod synthetic;

pub use dataset::{ColumnKind, Dataset, Matrix, Schema, SplitSpec, Standardizer};
pub use distance::DistanceMetric;
pub use error::{Error, Result};
pub use metrics::MetricReport;
pub use neighbors::{NeighborIndex, NeighborSet, SearchBackend};
pub use regressor::{DensityEstimate, KnnModel, KnnParams, WeightingMode};
pub use sweep::{Criterion, SweepConfig, SweepResult, SweepRow};
