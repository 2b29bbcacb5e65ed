use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use knn_core::dataset::{load_features_csv, load_query_csv};
use knn_core::regressor::density_at;
use knn_core::sweep::{emit_chart, emit_table, run_sweep};
use knn_core::{
    Criterion, Dataset, DistanceMetric, Error, KnnModel, KnnParams, NeighborIndex, SearchBackend,
    SplitSpec, SweepConfig, SweepResult,
};

use crate::args::{DensityArgs, EvalArgs, PredictArgs, SweepArgs};

pub const THREADS_ENV: &str = "KNN_SWEEP_THREADS";

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Error::InvalidThreads(e.to_string()).into()),
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::InvalidThreads(format!("{THREADS_ENV}={raw:?} is not a positive integer")).into()),
        },
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn dataset_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn summary_line(result: &SweepResult, criterion: Criterion, k: Option<usize>) -> String {
    let name = match criterion {
        Criterion::Rmse => "best_k_rmse",
        Criterion::R2 => "best_k_r2",
    };
    match k.and_then(|k| result.row(k)) {
        Some(row) => format!(
            "{name}={} rmse={} r_squared={}",
            row.k,
            row.report.rmse,
            row.report
                .r_squared
                .map_or_else(|| "undefined".to_string(), |v| v.to_string())
        ),
        None => format!("{name}=undefined"),
    }
}

pub fn sweep(args: SweepArgs) -> Result<()> {
    let data = Dataset::load_csv(&args.data, &args.target, &args.model.categorical)?;
    let config = SweepConfig {
        k_min: args.k_min,
        k_max: args.k_max,
        metric: args.model.metric(),
        weighting: args.model.weighting(),
        backend: args.model.backend(),
        split: SplitSpec::new(args.split.split, args.split.seed)?,
        standardize: !args.model.no_standardize,
        threads: threads_from_env()?,
    };
    let result = run_sweep(&data, &config)?;
    emit_table(&result, &args.out_table)?;

    let label = dataset_label(&args.data);
    if let Some(path) = &args.plot_rmse {
        emit_chart(&result, Criterion::Rmse, path, &format!("RMSE vs k ({label})"))?;
    }
    if let Some(path) = &args.plot_r2 {
        emit_chart(&result, Criterion::R2, path, &format!("R-squared vs k ({label})"))?;
    }

    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", summary_line(&result, Criterion::Rmse, Some(result.best_k_rmse)))?;
    writeln!(out, "{}", summary_line(&result, Criterion::R2, result.best_k_r2))?;
    Ok(())
}

pub fn eval(args: EvalArgs) -> Result<()> {
    let data = Dataset::load_csv(&args.data, &args.target, &args.model.categorical)?;
    let config = SweepConfig {
        k_min: args.k,
        k_max: args.k,
        metric: args.model.metric(),
        weighting: args.model.weighting(),
        backend: args.model.backend(),
        split: SplitSpec::new(args.split.split, args.split.seed)?,
        standardize: !args.model.no_standardize,
        threads: Some(1),
    };
    let result = run_sweep(&data, &config)?;
    let json = serde_json::to_string(&result.rows[0].report)?;
    writeln!(std::io::stdout().lock(), "{json}")?;
    Ok(())
}

pub fn predict(args: PredictArgs) -> Result<()> {
    let train = Dataset::load_csv(&args.train, &args.target, &args.model.categorical)?;
    let params = KnnParams::new(args.k)
        .metric(args.model.metric())
        .weighting(args.model.weighting())
        .backend(args.model.backend())
        .standardize(!args.model.no_standardize);
    let model = KnnModel::fit(&train, params)?;
    let queries = load_query_csv(&args.query, train.schema(), Some(&args.target))?;
    let predictions = model.predict_matrix(&queries)?;

    let mut csv = String::from("row_index,prediction\n");
    for (i, p) in predictions.iter().enumerate() {
        let _ = writeln!(csv, "{i},{p}");
    }
    write_file(&args.out, &csv)
}

pub fn density(args: DensityArgs) -> Result<()> {
    let metric: DistanceMetric = args.metric.into();
    if metric != DistanceMetric::Euclidean {
        return Err(Error::DensityNeedsEuclidean(metric).into());
    }
    let (index, schema) = match &args.target {
        Some(target) => {
            let train = Dataset::load_csv(&args.train, target, &args.categorical)?;
            let index = NeighborIndex::build(&train, metric, SearchBackend::KdTree)?;
            (index, train.schema().clone())
        }
        None => {
            let (schema, features) = load_features_csv(&args.train, &args.categorical)?;
            let index = NeighborIndex::from_matrix(
                features,
                schema.names(),
                schema.kinds(),
                metric,
                SearchBackend::KdTree,
            )?;
            (index, schema)
        }
    };
    if args.k == 0 || args.k > index.len() {
        return Err(Error::KOutOfRange {
            k: args.k,
            n: index.len(),
        }
        .into());
    }
    let queries = load_query_csv(&args.query, &schema, args.target.as_deref())?;

    let mut csv = String::from("row_index,density\n");
    for (i, q) in queries.iter_rows().enumerate() {
        match density_at(&index, q, args.k) {
            Ok(est) => {
                let _ = writeln!(csv, "{i},{}", est.value);
            }
            Err(Error::ZeroRadius) => {
                let _ = writeln!(csv, "{i},inf");
            }
            Err(e) => bail!(e),
        }
    }
    match &args.out {
        Some(path) => write_file(path, &csv),
        None => {
            std::io::stdout().lock().write_all(csv.as_bytes())?;
            Ok(())
        }
    }
}
