//! K-nearest-neighbors regression and the kNN density estimate.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Matrix, Standardizer};
use crate::distance::DistanceMetric;
use crate::error::{Error, Result};
use crate::neighbors::{NeighborIndex, NeighborSet, SearchBackend};

/// How neighbor targets are combined into a prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightingMode {
    /// Arithmetic mean of the k targets.
    #[default]
    Uniform,
    /// Weights `1 / d_i`. When some neighbors sit at distance zero, the
    /// prediction is the mean of exactly those neighbors' targets.
    InverseDistance,
}

impl WeightingMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            WeightingMode::Uniform => "uniform",
            WeightingMode::InverseDistance => "inverse",
        }
    }
}

impl fmt::Display for WeightingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightingMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(WeightingMode::Uniform),
            "inverse" => Ok(WeightingMode::InverseDistance),
            _ => Err(format!("unknown weighting {s:?} (expected uniform or inverse)")),
        }
    }
}

/// Hyperparameters for [`KnnModel::fit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnnParams {
    pub k: usize,
    pub metric: DistanceMetric,
    pub weighting: WeightingMode,
    pub backend: SearchBackend,
    /// Z-score numeric columns with training statistics before indexing.
    pub standardize: bool,
}

impl KnnParams {
    pub fn new(k: usize) -> Self {
        KnnParams {
            k,
            metric: DistanceMetric::default(),
            weighting: WeightingMode::default(),
            backend: SearchBackend::default(),
            standardize: false,
        }
    }

    pub fn metric(mut self, metric: DistanceMetric) -> Self {
        self.metric = metric;
        self
    }

    pub fn weighting(mut self, weighting: WeightingMode) -> Self {
        self.weighting = weighting;
        self
    }

    pub fn backend(mut self, backend: SearchBackend) -> Self {
        self.backend = backend;
        self
    }

    pub fn standardize(mut self, standardize: bool) -> Self {
        self.standardize = standardize;
        self
    }
}

/// Fitted KNN regressor. Immutable; the neighbor index is shared between
/// models derived with [`KnnModel::with_k`].
#[derive(Debug, Clone)]
pub struct KnnModel {
    train: Arc<Dataset>,
    k: usize,
    weighting: WeightingMode,
    index: Arc<NeighborIndex>,
    standardizer: Option<Arc<Standardizer>>,
}

impl KnnModel {
    pub fn fit(train: &Dataset, params: KnnParams) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::EmptyData);
        }
        check_k(params.k, train.n_rows())?;
        let (train, standardizer) = if params.standardize {
            let s = Standardizer::fit(train)?;
            (s.apply(train)?, Some(Arc::new(s)))
        } else {
            (train.clone(), None)
        };
        let index = NeighborIndex::build(&train, params.metric, params.backend)?;
        Ok(KnnModel {
            train: Arc::new(train),
            k: params.k,
            weighting: params.weighting,
            index: Arc::new(index),
            standardizer,
        })
    }

    /// Same training data and index, different neighbor count.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        check_k(k, self.train.n_rows())?;
        Ok(KnnModel { k, ..self.clone() })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn metric(&self) -> DistanceMetric {
        self.index.metric()
    }

    pub fn weighting(&self) -> WeightingMode {
        self.weighting
    }

    pub fn backend(&self) -> SearchBackend {
        self.index.backend()
    }

    /// Training data as indexed (standardized when enabled).
    pub fn train(&self) -> &Dataset {
        &self.train
    }

    pub fn index(&self) -> &NeighborIndex {
        &self.index
    }

    pub fn standardizer(&self) -> Option<&Standardizer> {
        self.standardizer.as_deref()
    }

    /// The k nearest training rows to a raw (unstandardized) query.
    pub fn neighbors(&self, q: &[f64]) -> Result<NeighborSet> {
        match &self.standardizer {
            Some(s) => self.index.query(&s.apply_row(q)?, self.k),
            None => self.index.query(q, self.k),
        }
    }

    pub fn predict_one(&self, q: &[f64]) -> Result<f64> {
        let set = self.neighbors(q)?;
        Ok(combine(self.train.target(), &set, self.weighting))
    }

    /// Predicts each row of a dataset with the training schema, in row order.
    pub fn predict(&self, queries: &Dataset) -> Result<Vec<f64>> {
        self.train.schema().check_compatible(queries.schema())?;
        self.predict_matrix(queries.features())
    }

    /// Predicts each row of a bare feature matrix in training column order.
    pub fn predict_matrix(&self, queries: &Matrix) -> Result<Vec<f64>> {
        if queries.cols() != self.index.dim() && !queries.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: self.index.dim(),
                got: queries.cols(),
            });
        }
        queries.iter_rows().map(|q| self.predict_one(q)).collect()
    }

    /// kNN density at a raw query, measured in the model's feature space
    /// (standardized units when the model standardizes).
    pub fn estimate_density(&self, q: &[f64]) -> Result<DensityEstimate> {
        match &self.standardizer {
            Some(s) => density_at(&self.index, &s.apply_row(q)?, self.k),
            None => density_at(&self.index, q, self.k),
        }
    }
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    Ok(())
}

/// Combines the targets of a non-empty neighbor set.
pub fn combine(targets: &[f64], set: &NeighborSet, weighting: WeightingMode) -> f64 {
    debug_assert!(!set.is_empty());
    let mean_of = |idx: &[usize]| idx.iter().fold(0.0, |acc, &i| acc + targets[i]) / idx.len() as f64;
    match weighting {
        WeightingMode::Uniform => mean_of(&set.indices),
        WeightingMode::InverseDistance => {
            // distances are sorted, so exact matches form a prefix
            let exact = set.distances.iter().take_while(|&&d| d == 0.0).count();
            if exact > 0 {
                return mean_of(&set.indices[..exact]);
            }
            let (mut num, mut den) = (0.0, 0.0);
            for (&i, &d) in set.indices.iter().zip(&set.distances) {
                let w = 1.0 / d;
                num += w * targets[i];
                den += w;
            }
            num / den
        }
    }
}

/// Local density `k / (n * V)` where `V` is the volume of the euclidean ball
/// reaching the k-th neighbor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub value: f64,
    /// Distance to the k-th neighbor.
    pub radius: f64,
}

/// Volume of the unit ball in `d` dimensions, `pi^(d/2) / gamma(d/2 + 1)`,
/// via `c_d = c_{d-2} * 2 pi / d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    let (mut c, mut i) = if d.is_multiple_of(2) { (1.0, 2) } else { (2.0, 3) };
    while i <= d {
        c *= 2.0 * PI / i as f64;
        i += 2;
    }
    c
}

pub fn density_at(index: &NeighborIndex, q: &[f64], k: usize) -> Result<DensityEstimate> {
    if index.metric() != DistanceMetric::Euclidean {
        return Err(Error::DensityNeedsEuclidean(index.metric()));
    }
    if k == 0 || k > index.len() {
        return Err(Error::KOutOfRange { k, n: index.len() });
    }
    let r = index.query_radius_of_kth(q, k)?;
    let d = index.dim();
    let volume = unit_ball_volume(d) * r.powi(d as i32);
    if volume == 0.0 {
        return Err(Error::ZeroRadius);
    }
    Ok(DensityEstimate {
        value: k as f64 / (index.len() as f64 * volume),
        radius: r,
    })
}
