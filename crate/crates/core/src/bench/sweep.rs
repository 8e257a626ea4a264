use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, SweepPoint};
use super::csv::{create_output, error_log_path, write_csv, write_error_log};
use super::trial::{run_trial_set, TrialRecord};
use crate::recovery::Algorithm;
use crate::{Error, Result};

/// Aggregate over the trials of one `(algorithm, point)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub algorithm: Algorithm,
    pub m: usize,
    pub snapshots: usize,
    pub tau: f64,
    pub mean: f64,
    pub trials: usize,
    pub successes: usize,
    /// Trials that ended in an error; counted as failures.
    pub errors: usize,
    pub success_rate: f64,
    /// Binomial standard error `sqrt(p (1 - p) / trials)`.
    pub stderr: f64,
    pub mean_wall_time_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub algorithm: Algorithm,
    pub point: SweepPoint,
    pub trial_index: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: ExperimentConfig,
    /// Sorted by algorithm name, then `m`, `N`, `tau` and mean.
    pub rows: Vec<AggregateRow>,
    pub failures: Vec<TrialFailure>,
}

impl SweepResult {
    pub fn row(&self, algorithm: Algorithm, m: usize, snapshots: usize) -> Option<&AggregateRow> {
        self.rows
            .iter()
            .find(|r| r.algorithm == algorithm && r.m == m && r.snapshots == snapshots)
    }
}

fn aggregate(algorithm: Algorithm, point: &SweepPoint, records: &[&TrialRecord]) -> AggregateRow {
    let trials = records.len();
    let successes = records.iter().filter(|r| r.success).count();
    let errors = records.iter().filter(|r| r.error.is_some()).count();
    let p = successes as f64 / trials as f64;
    let times: Option<Vec<f64>> = records.iter().map(|r| r.wall_time_ms).collect();
    AggregateRow {
        algorithm,
        m: point.m,
        snapshots: point.snapshots,
        tau: point.tau,
        mean: point.mean,
        trials,
        successes,
        errors,
        success_rate: p,
        stderr: (p * (1.0 - p) / trials as f64).sqrt(),
        mean_wall_time_ms: times.map(|t| t.iter().sum::<f64>() / t.len() as f64),
    }
}

/// Runs every `(point, trial)` job on a pool of `workers` threads. Results
/// are collected in job order, so the output does not depend on scheduling.
pub fn run_sweep(cfg: &ExperimentConfig, workers: usize) -> Result<SweepResult> {
    cfg.validate()?;
    let points = cfg.points();
    let jobs: Vec<(usize, u64)> = (0..points.len())
        .flat_map(|p| (0..cfg.trials as u64).map(move |t| (p, t)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::param(format!("cannot start worker pool: {e}")))?;
    let records: Vec<Vec<TrialRecord>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(p, t)| run_trial_set(cfg, &points[p], t, &cfg.algorithms))
            .collect()
    });

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (pi, point) in points.iter().enumerate() {
        let chunk = &records[pi * cfg.trials..(pi + 1) * cfg.trials];
        for (ai, &alg) in cfg.algorithms.iter().enumerate() {
            let recs: Vec<&TrialRecord> = chunk.iter().map(|set| &set[ai]).collect();
            rows.push(aggregate(alg, point, &recs));
            failures.extend(recs.iter().filter_map(|r| {
                r.error.as_ref().map(|msg| TrialFailure {
                    algorithm: alg,
                    point: *point,
                    trial_index: r.trial_index,
                    message: msg.clone(),
                })
            }));
        }
    }
    rows.sort_by(|a, b| {
        a.algorithm
            .name()
            .cmp(b.algorithm.name())
            .then(a.m.cmp(&b.m))
            .then(a.snapshots.cmp(&b.snapshots))
            .then(a.tau.total_cmp(&b.tau))
            .then(a.mean.total_cmp(&b.mean))
    });
    Ok(SweepResult {
        config: cfg.clone(),
        rows,
        failures,
    })
}

/// Runs the sweep and writes the CSV to `path`, plus an error sidecar
/// `<path>.errors.csv` when any trial failed with an error. The output file
/// is created before the first trial so that unwritable paths fail fast.
pub fn run_sweep_to(cfg: &ExperimentConfig, workers: usize, path: &Path) -> Result<SweepResult> {
    cfg.validate()?;
    let mut out = create_output(path)?;
    let result = run_sweep(cfg, workers)?;
    write_csv(&result, &mut out).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))?;
    let sidecar = error_log_path(path);
    if result.failures.is_empty() {
        if sidecar.exists() {
            std::fs::remove_file(&sidecar).map_err(|e| Error::io(&sidecar, e))?;
        }
    } else {
        let log = create_output(&sidecar)?;
        write_error_log(&result.failures, log).map_err(|e| Error::io(&sidecar, e))?;
    }
    Ok(result)
}
