use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use knn_core::{DistanceMetric, SearchBackend, WeightingMode};

#[derive(Debug, Parser)]
#[command(
    name = "knn-sweep",
    version,
    about = "K-nearest-neighbors regression: k sweeps, evaluation, prediction and density estimates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate RMSE and R-squared for every k in a range on one train/test split.
    Sweep(SweepArgs),
    /// Evaluate a single k and print the metrics as JSON.
    Eval(EvalArgs),
    /// Fit on one CSV and predict the rows of another.
    Predict(PredictArgs),
    /// Estimate the kNN density k / (n * V) at each query row (euclidean only).
    Density(DensityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Euclidean,
    Manhattan,
    Hamming,
}

impl From<MetricArg> for DistanceMetric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Euclidean => DistanceMetric::Euclidean,
            MetricArg::Manhattan => DistanceMetric::Manhattan,
            MetricArg::Hamming => DistanceMetric::Hamming,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightingArg {
    Uniform,
    Inverse,
}

impl From<WeightingArg> for WeightingMode {
    fn from(w: WeightingArg) -> Self {
        match w {
            WeightingArg::Uniform => WeightingMode::Uniform,
            WeightingArg::Inverse => WeightingMode::InverseDistance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Brute,
    Kdtree,
}

impl From<BackendArg> for SearchBackend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Brute => SearchBackend::BruteForce,
            BackendArg::Kdtree => SearchBackend::KdTree,
        }
    }
}

/// Options shared by every subcommand that fits a regressor.
#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Comma-separated feature columns to treat as categorical labels.
    #[arg(long, value_name = "NAME,...", value_delimiter = ',')]
    pub categorical: Vec<String>,
    #[arg(long, value_enum, default_value = "euclidean")]
    pub metric: MetricArg,
    #[arg(long, value_enum, default_value = "uniform")]
    pub weighting: WeightingArg,
    /// Neighbor search backend [default: kdtree, or brute for hamming]
    #[arg(long, value_enum)]
    pub backend: Option<BackendArg>,
    /// Use raw feature values instead of z-scores fitted on the training rows.
    #[arg(long)]
    pub no_standardize: bool,
}

impl ModelArgs {
    pub fn metric(&self) -> DistanceMetric {
        self.metric.into()
    }

    pub fn weighting(&self) -> WeightingMode {
        self.weighting.into()
    }

    pub fn backend(&self) -> SearchBackend {
        match (self.backend, self.metric) {
            (Some(b), _) => b.into(),
            (None, MetricArg::Hamming) => SearchBackend::BruteForce,
            (None, _) => SearchBackend::KdTree,
        }
    }
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// Fraction of rows used for training.
    #[arg(long, value_name = "FRACTION", default_value_t = 0.8)]
    pub split: f64,
    #[arg(long, value_name = "UINT", default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_name = "PATH")]
    pub data: PathBuf,
    #[arg(long, value_name = "NAME")]
    pub target: String,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_name = "INT", default_value_t = 1)]
    pub k_min: usize,
    #[arg(long, value_name = "INT", default_value_t = knn_core::sweep::DEFAULT_K_MAX)]
    pub k_max: usize,
    #[command(flatten)]
    pub split: SplitArgs,
    /// Per-k metrics table (CSV).
    #[arg(long, value_name = "PATH")]
    pub out_table: PathBuf,
    /// RMSE-versus-k chart (SVG).
    #[arg(long, value_name = "PATH")]
    pub plot_rmse: Option<PathBuf>,
    /// R-squared-versus-k chart (SVG).
    #[arg(long, value_name = "PATH")]
    pub plot_r2: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_name = "PATH")]
    pub data: PathBuf,
    #[arg(long, value_name = "NAME")]
    pub target: String,
    #[arg(long, value_name = "INT")]
    pub k: usize,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub split: SplitArgs,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long, value_name = "PATH")]
    pub train: PathBuf,
    /// Rows to predict; must carry the training feature columns.
    #[arg(long, value_name = "PATH")]
    pub query: PathBuf,
    #[arg(long, value_name = "NAME")]
    pub target: String,
    #[arg(long, value_name = "INT")]
    pub k: usize,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Output CSV with header row_index,prediction.
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long, value_name = "PATH")]
    pub train: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub query: PathBuf,
    #[arg(long, value_name = "INT")]
    pub k: usize,
    /// Column to exclude from the features, if the files carry one.
    #[arg(long, value_name = "NAME")]
    pub target: Option<String>,
    #[arg(long, value_name = "NAME,...", value_delimiter = ',')]
    pub categorical: Vec<String>,
    /// Only euclidean is supported.
    #[arg(long, value_enum, default_value = "euclidean")]
    pub metric: MetricArg,
    /// Output CSV with header row_index,density [default: standard output]
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}
