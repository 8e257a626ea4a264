use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::recovery::{
    Algorithm, FilterTruncation, InitAlgorithm, RecoveryConfig, DEFAULT_RESIDUAL_TOL,
};
use crate::{Error, Result};

/// Dictionary family of a sweep. Gaussian sweeps run in real arithmetic,
/// Fourier sweeps in complex arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gaussian,
    Fourier,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Family::Gaussian),
            "fourier" => Ok(Family::Fourier),
            _ => Err(Error::param(format!(
                "unknown matrix family `{s}` (expected gaussian or fourier)"
            ))),
        }
    }
}

/// One cell of the sweep grid, shared by every algorithm and trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub m: usize,
    pub snapshots: usize,
    pub tau: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub family: Family,
    /// Entry means of the Gaussian family; ignored for Fourier.
    pub means: Vec<f64>,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub snapshots: Vec<usize>,
    pub m: Vec<usize>,
    /// `f64::INFINITY` for noiseless sweeps.
    pub snr_db: f64,
    pub taus: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub init: InitAlgorithm,
    pub filter_truncation: FilterTruncation,
    pub output_path: Option<PathBuf>,
    /// Record per-trial wall time. Off by default so outputs are reproducible.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            family: Family::Gaussian,
            means: vec![0.0],
            n: 128,
            k: 8,
            r: 4,
            snapshots: vec![16],
            m: (1..=30).collect(),
            snr_db: 30.0,
            taus: vec![1.0],
            trials: 1000,
            master_seed: 0,
            algorithms: vec![Algorithm::SeqCsMusic, Algorithm::CsMusic],
            init: InitAlgorithm::SubspaceSomp,
            filter_truncation: FilterTruncation::Off,
            output_path: None,
            timing: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::param(msg));
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        if self.m.is_empty() || self.m.contains(&0) {
            return fail(format!(
                "m values must be non-empty and >= 1, got {:?}",
                self.m
            ));
        }
        if self.snapshots.is_empty() || self.taus.is_empty() || self.means.is_empty() {
            return fail("snapshots, taus and means must be non-empty".into());
        }
        if has_duplicates(&self.m)
            || has_duplicates(&self.snapshots)
            || has_duplicates(&self.algorithms)
            || has_duplicates(&self.taus.iter().map(|t| t.to_bits()).collect::<Vec<_>>())
            || has_duplicates(&self.means.iter().map(|t| t.to_bits()).collect::<Vec<_>>())
        {
            return fail("sweep lists must not contain duplicates".into());
        }
        if self.algorithms.is_empty() {
            return fail("no algorithms selected".into());
        }
        if self.r == 0 || self.k > self.n {
            return fail(format!(
                "need r >= 1 and k <= n, got r = {}, k = {}, n = {}",
                self.r, self.k, self.n
            ));
        }
        if let Some(&bad) = self.snapshots.iter().find(|&&s| self.r > self.k.min(s)) {
            return fail(format!(
                "r = {} exceeds min(k = {}, N = {bad})",
                self.r, self.k
            ));
        }
        if let Some(bad) = self.taus.iter().find(|t| !(**t > 0.0 && **t <= 1.0)) {
            return fail(format!("tau {bad} outside (0, 1]"));
        }
        if let Some(bad) = self.means.iter().find(|x| !x.is_finite()) {
            return fail(format!("mean {bad} is not finite"));
        }
        if self.family == Family::Fourier && self.means.iter().any(|&x| x != 0.0) {
            return fail("the Fourier family has no mean parameter; use means = [0]".into());
        }
        if self.snr_db.is_nan() || self.snr_db == f64::NEG_INFINITY {
            return fail(format!("snr_db {} is not usable", self.snr_db));
        }
        Ok(())
    }

    pub fn recovery(&self) -> Result<RecoveryConfig> {
        let cfg = RecoveryConfig {
            k: self.k,
            r: self.r,
            init: self.init,
            residual_tol: DEFAULT_RESIDUAL_TOL,
            filter_truncation: self.filter_truncation,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Grid cells in `m`, then `N`, then `tau`, then mean order.
    pub fn points(&self) -> Vec<SweepPoint> {
        let mut out = Vec::new();
        for &m in &self.m {
            for &snapshots in &self.snapshots {
                for &tau in &self.taus {
                    for &mean in &self.means {
                        out.push(SweepPoint {
                            m,
                            snapshots,
                            tau,
                            mean,
                        });
                    }
                }
            }
        }
        out
    }
}

fn has_duplicates<T: Ord + Clone>(xs: &[T]) -> bool {
    let mut v = xs.to_vec();
    v.sort();
    v.windows(2).any(|w| w[0] == w[1])
}

/// Config-file overrides. Every key is optional; present keys replace the
/// corresponding field of the base configuration.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub preset: Option<String>,
    pub matrix_family: Option<Family>,
    pub mean: Option<Vec<f64>>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub r: Option<usize>,
    pub snapshots: Option<Vec<usize>>,
    pub m: Option<Vec<usize>>,
    pub m_min: Option<usize>,
    pub m_max: Option<usize>,
    /// `None` keeps the base value; a string `"inf"` means noiseless.
    pub snr_db: Option<SnrValue>,
    pub tau: Option<Vec<f64>>,
    pub trials: Option<usize>,
    pub master_seed: Option<u64>,
    pub algorithms: Option<Vec<Algorithm>>,
    pub init: Option<InitAlgorithm>,
    pub filter_truncation: Option<FilterTruncation>,
    pub output_path: Option<PathBuf>,
    pub timing: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SnrValue {
    Db(f64),
    Text(String),
}

impl SnrValue {
    pub fn to_db(&self) -> Result<f64> {
        match self {
            SnrValue::Db(v) => Ok(*v),
            SnrValue::Text(s) => parse_snr(s),
        }
    }
}

/// Parses a decibel value, accepting `inf` for noiseless runs.
pub fn parse_snr(s: &str) -> Result<f64> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "+inf" => Ok(f64::INFINITY),
        other => other
            .parse::<f64>()
            .map_err(|_| Error::param(format!("invalid SNR `{s}`"))),
    }
}

impl ConfigOverrides {
    pub fn apply(&self, mut cfg: ExperimentConfig) -> Result<ExperimentConfig> {
        macro_rules! take {
            ($src:ident => $dst:ident) => {
                if let Some(v) = &self.$src {
                    cfg.$dst = v.clone();
                }
            };
        }
        take!(matrix_family => family);
        take!(mean => means);
        take!(n => n);
        take!(k => k);
        take!(r => r);
        take!(snapshots => snapshots);
        take!(m => m);
        take!(tau => taus);
        take!(trials => trials);
        take!(master_seed => master_seed);
        take!(algorithms => algorithms);
        take!(init => init);
        take!(filter_truncation => filter_truncation);
        take!(timing => timing);
        if self.output_path.is_some() {
            cfg.output_path = self.output_path.clone();
        }
        match (self.m_min, self.m_max) {
            (None, None) => {}
            (lo, hi) => {
                if self.m.is_some() {
                    return Err(Error::param("give either m or m_min/m_max, not both"));
                }
                let lo = lo.unwrap_or(1);
                let hi = hi.unwrap_or_else(|| cfg.m.iter().copied().max().unwrap_or(lo));
                if lo == 0 || lo > hi {
                    return Err(Error::param(format!("invalid m range {lo}..={hi}")));
                }
                cfg.m = (lo..=hi).collect();
            }
        }
        if let Some(snr) = &self.snr_db {
            cfg.snr_db = snr.to_db()?;
        }
        Ok(cfg)
    }
}
