use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Family, SweepPoint};
use crate::problem::{
    canonicalize, gen_fourier_sensing, gen_gaussian_sensing, gen_ground_truth, synthesize,
    Instance, SensingMatrix,
};
use crate::recovery::{Algorithm, AlgorithmOutput, RecoveryConfig};
use crate::seed::{mix, STREAM_MATRIX, STREAM_NOISE, STREAM_TRUTH};
use crate::{Complex, Result, Scalar};

/// Seeds of one trial.
///
/// `trial = mix(master_seed ^ trial_index, point_key)`, where the point key
/// hashes `m`, `N`, `tau` and the mean; component seeds are
/// `mix(trial, stream)`. The algorithm is deliberately not an input: every
/// algorithm of a trial sees the same instance, so comparisons are paired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialSeeds {
    pub trial: u64,
    pub matrix: u64,
    pub truth: u64,
    pub noise: u64,
}

impl TrialSeeds {
    pub fn derive(master_seed: u64, point: &SweepPoint, trial_index: u64) -> Self {
        let key = [
            point.m as u64,
            point.snapshots as u64,
            point.tau.to_bits(),
            point.mean.to_bits(),
        ]
        .into_iter()
        .fold(0x5EED_u64, mix);
        let trial = mix(master_seed ^ trial_index, key);
        TrialSeeds {
            trial,
            matrix: mix(trial, STREAM_MATRIX),
            truth: mix(trial, STREAM_TRUTH),
            noise: mix(trial, STREAM_NOISE),
        }
    }
}

/// Intermediate supports of the multi-stage algorithms.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StageDiagnostics {
    pub init: Option<Vec<usize>>,
    pub filtered: Option<Vec<usize>>,
    /// Scores of the final estimate, in selection order.
    pub scores: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub algorithm: Algorithm,
    pub point: SweepPoint,
    /// Sorted estimated support; empty when the trial errored.
    pub estimated_support: Vec<usize>,
    pub true_support: Vec<usize>,
    pub success: bool,
    /// Error raised by instance generation or by the algorithm.
    pub error: Option<String>,
    /// Only recorded when timing is enabled.
    pub wall_time_ms: Option<f64>,
    pub diagnostics: StageDiagnostics,
}

fn gen_instance<T: Scalar>(
    a: SensingMatrix<T>,
    cfg: &ExperimentConfig,
    point: &SweepPoint,
    seeds: &TrialSeeds,
) -> Result<Instance<T>> {
    let truth =
        gen_ground_truth::<T>(cfg.n, cfg.k, cfg.r, point.snapshots, point.tau, seeds.truth)?;
    let ensemble = synthesize(&a, &truth, cfg.snr_db, seeds.noise)?;
    Ok(Instance {
        sensing: a,
        truth,
        ensemble,
    })
}

pub fn gaussian_instance(
    cfg: &ExperimentConfig,
    point: &SweepPoint,
    seeds: &TrialSeeds,
) -> Result<Instance<f64>> {
    let a = gen_gaussian_sensing(point.m, cfg.n, point.mean, seeds.matrix)?;
    gen_instance(a, cfg, point, seeds)
}

pub fn fourier_instance(
    cfg: &ExperimentConfig,
    point: &SweepPoint,
    seeds: &TrialSeeds,
) -> Result<Instance<Complex<f64>>> {
    let a = gen_fourier_sensing(point.m, cfg.n, seeds.matrix)?;
    gen_instance(a, cfg, point, seeds)
}

fn run_one<T: Scalar>(
    inst: &Instance<T>,
    rcfg: &RecoveryConfig,
    algorithm: Algorithm,
) -> Result<AlgorithmOutput> {
    let canonical = canonicalize(&inst.sensing, &inst.ensemble, rcfg.r)?;
    algorithm.run(&inst.sensing, &inst.ensemble.y, &canonical.signal, rcfg)
}

fn record_for<T: Scalar>(
    inst: &Result<Instance<T>>,
    rcfg: &Result<RecoveryConfig>,
    timing: bool,
    point: &SweepPoint,
    trial_index: u64,
    algorithm: Algorithm,
) -> TrialRecord {
    let start = timing.then(Instant::now);
    let outcome = match (inst, rcfg) {
        (Ok(inst), Ok(rcfg)) => run_one(inst, rcfg, algorithm)
            .map(|out| (out, &inst.truth.support))
            .map_err(|e| e.to_string()),
        (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
    };
    let wall_time_ms = start.map(|t| t.elapsed().as_secs_f64() * 1e3);
    let true_support = inst
        .as_ref()
        .map(|i| i.truth.support.clone())
        .unwrap_or_default();
    let mut rec = TrialRecord {
        trial_index,
        algorithm,
        point: *point,
        estimated_support: Vec::new(),
        true_support,
        success: false,
        error: None,
        wall_time_ms,
        diagnostics: StageDiagnostics::default(),
    };
    match outcome {
        Ok((out, support)) => {
            rec.success = out.estimate.matches(support);
            rec.estimated_support = out.estimate.sorted();
            rec.diagnostics = StageDiagnostics {
                init: out.init.map(|e| e.indices),
                filtered: out.filtered.map(|e| e.indices),
                scores: out.estimate.scores,
            };
        }
        Err(e) => rec.error = Some(e),
    }
    rec
}

/// Generates the instance of `(point, trial_index)` once and runs every
/// algorithm in `algorithms` on it. Failures of any stage are recorded as
/// failed trials carrying the error message.
pub fn run_trial_set(
    cfg: &ExperimentConfig,
    point: &SweepPoint,
    trial_index: u64,
    algorithms: &[Algorithm],
) -> Vec<TrialRecord> {
    let seeds = TrialSeeds::derive(cfg.master_seed, point, trial_index);
    let rcfg = cfg.recovery();
    match cfg.family {
        Family::Gaussian => {
            let inst = gaussian_instance(cfg, point, &seeds);
            algorithms
                .iter()
                .map(|&alg| record_for(&inst, &rcfg, cfg.timing, point, trial_index, alg))
                .collect()
        }
        Family::Fourier => {
            let inst = fourier_instance(cfg, point, &seeds);
            algorithms
                .iter()
                .map(|&alg| record_for(&inst, &rcfg, cfg.timing, point, trial_index, alg))
                .collect()
        }
    }
}

pub fn run_trial(
    cfg: &ExperimentConfig,
    point: &SweepPoint,
    trial_index: u64,
    algorithm: Algorithm,
) -> TrialRecord {
    run_trial_set(cfg, point, trial_index, &[algorithm])
        .pop()
        .expect("one record per algorithm")
}
