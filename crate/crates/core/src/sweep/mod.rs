//! Metric-versus-k experiments.
//!
//! A sweep splits the data once, fits one model (and one neighbor index) on
//! the training side, then scores the held-out rows for every k in the
//! range. Rows are independent and evaluated in parallel; results are
//! assembled in k order, so output does not depend on scheduling.

mod chart;
mod table;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dataset::{Dataset, SplitSpec};
use crate::distance::DistanceMetric;
use crate::error::{Error, Result};
use crate::metrics::MetricReport;
use crate::neighbors::SearchBackend;
use crate::regressor::{KnnModel, KnnParams, WeightingMode};

pub use chart::{emit_chart, render_chart, CHART_HEIGHT, CHART_WIDTH};
pub use table::{emit_table, format_sig12, render_table, TABLE_HEADER};

/// Upper end of the default k range.
pub const DEFAULT_K_MAX: usize = 76;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub k_min: usize,
    pub k_max: usize,
    pub metric: DistanceMetric,
    pub weighting: WeightingMode,
    pub backend: SearchBackend,
    pub split: SplitSpec,
    pub standardize: bool,
    /// Worker cap for per-k evaluation; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            k_min: 1,
            k_max: DEFAULT_K_MAX,
            metric: DistanceMetric::default(),
            weighting: WeightingMode::default(),
            backend: SearchBackend::default(),
            split: SplitSpec::default(),
            standardize: true,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub k: usize,
    pub report: MetricReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// One row per k, k strictly increasing.
    pub rows: Vec<SweepRow>,
    pub best_k_rmse: usize,
    /// `None` when the test targets are constant.
    pub best_k_r2: Option<usize>,
    pub n_train: usize,
    pub n_test: usize,
}

impl SweepResult {
    pub fn row(&self, k: usize) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.k == k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    Rmse,
    R2,
}

impl Criterion {
    pub fn value(&self, report: &MetricReport) -> Option<f64> {
        match self {
            Criterion::Rmse => Some(report.rmse),
            Criterion::R2 => report.r_squared,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Criterion::Rmse => "RMSE",
            Criterion::R2 => "R-squared",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Rmse => "rmse",
            Criterion::R2 => "r2",
        })
    }
}

impl FromStr for Criterion {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "rmse" => Ok(Criterion::Rmse),
            "r2" => Ok(Criterion::R2),
            _ => Err(format!("unknown criterion {s:?} (expected rmse or r2)")),
        }
    }
}

/// Lowest RMSE or highest R-squared; the smallest k wins ties.
pub fn select_best(rows: &[SweepRow], criterion: Criterion) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for row in rows {
        let Some(v) = criterion.value(&row.report) else {
            continue;
        };
        let better = match (best, criterion) {
            (None, _) => true,
            (Some((_, b)), Criterion::Rmse) => v < b,
            (Some((_, b)), Criterion::R2) => v > b,
        };
        if better {
            best = Some((row.k, v));
        }
    }
    match (best, criterion) {
        (Some((k, _)), _) => Ok(k),
        (None, Criterion::R2) if !rows.is_empty() => Err(Error::NoDefinedRSquared),
        (None, _) => Err(Error::EmptyInput),
    }
}

pub fn run_sweep(data: &Dataset, config: &SweepConfig) -> Result<SweepResult> {
    let (train, test) = data.split(&config.split)?;
    let n_train = train.n_rows();
    if config.k_min == 0 || config.k_min > config.k_max || config.k_max > n_train {
        return Err(Error::InvalidKRange {
            k_min: config.k_min,
            k_max: config.k_max,
            n_train,
        });
    }
    let params = KnnParams::new(config.k_min)
        .metric(config.metric)
        .weighting(config.weighting)
        .backend(config.backend)
        .standardize(config.standardize);
    let base = KnnModel::fit(&train, params)?;

    let evaluate = |k: usize| -> Result<SweepRow> {
        let model = base.with_k(k)?;
        let predictions = model.predict_matrix(test.features())?;
        Ok(SweepRow {
            k,
            report: MetricReport::new(test.target(), &predictions)?,
        })
    };
    let ks = config.k_min..=config.k_max;
    let rows: Result<Vec<SweepRow>> = match config.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidThreads(e.to_string()))?;
            pool.install(|| ks.into_par_iter().map(evaluate).collect())
        }
        None => ks.into_par_iter().map(evaluate).collect(),
    };
    let rows = rows?;

    Ok(SweepResult {
        best_k_rmse: select_best(&rows, Criterion::Rmse)?,
        best_k_r2: select_best(&rows, Criterion::R2).ok(),
        rows,
        n_train,
        n_test: test.n_rows(),
    })
}
