//! Support recovery: greedy initializers, MUSIC-type criteria, and the
//! forward/backward sequential steps that make up sequential CS-MUSIC.
//!
//! Every selection ranks candidates and breaks ties by the lowest index, so
//! identical inputs always produce identical estimates.

mod greedy;
mod music;
mod pipeline;
mod sequential;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use greedy::{s_omp, subspace_s_omp, two_thresholding};
pub use music::{generalized_music, music};
pub use pipeline::{least_squares_coefficients, seq_cs_music, Algorithm, AlgorithmOutput};
pub use sequential::{filtering_scores, seq_subspace, support_filtering};

/// Default relative residual threshold for noiseless in-range tests.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-10;

/// Relative tolerance used to find the column space of augmented matrices.
pub const AUGMENTED_RANK_TOL: f64 = 1e-10;

/// Ordered support estimate with one diagnostic score per index.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SupportEstimate {
    pub indices: Vec<usize>,
    pub scores: Vec<f64>,
}

impl SupportEstimate {
    pub fn new(indices: Vec<usize>, scores: Vec<f64>, n: usize) -> Result<Self> {
        if indices.len() != scores.len() {
            return Err(Error::param("one score per index is required"));
        }
        let mut seen = BTreeSet::new();
        for &i in &indices {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, len: n });
            }
            if !seen.insert(i) {
                return Err(Error::param(format!("index {i} appears twice")));
            }
        }
        Ok(Self { indices, scores })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn as_set(&self) -> BTreeSet<usize> {
        self.indices.iter().copied().collect()
    }

    pub fn sorted(&self) -> Vec<usize> {
        let mut v = self.indices.clone();
        v.sort_unstable();
        v
    }

    /// Set equality with `support`.
    pub fn matches(&self, support: &[usize]) -> bool {
        self.indices.len() == support.len() && self.as_set() == support.iter().copied().collect()
    }
}

/// Initial k-sparse estimator used by sequential CS-MUSIC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitAlgorithm {
    #[default]
    SubspaceSomp,
    TwoThresholding,
}

/// How many leading entries of the initial estimate enter support filtering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterTruncation {
    /// Filter the whole estimate.
    #[default]
    Off,
    /// Keep the first `c` entries.
    Count(usize),
    /// Keep the first `2(k - r) + l` entries with `l = clamp(m - (2k - r), 1, r)`.
    Redundancy,
}

impl FilterTruncation {
    pub fn bound(self, k: usize, r: usize, m: usize) -> Option<usize> {
        match self {
            FilterTruncation::Off => None,
            FilterTruncation::Count(c) => Some(c),
            FilterTruncation::Redundancy => Some(2 * (k - r) + redundancy_l(k, r, m)),
        }
    }
}

/// Redundancy estimate `l = clamp(m - (2k - r), 1, r)`.
pub fn redundancy_l(k: usize, r: usize, m: usize) -> usize {
    let excess = m as i64 - (2 * k as i64 - r as i64);
    excess.clamp(1, r.max(1) as i64) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveryConfig {
    pub k: usize,
    pub r: usize,
    pub init: InitAlgorithm,
    pub residual_tol: f64,
    pub filter_truncation: FilterTruncation,
}

impl RecoveryConfig {
    pub fn new(k: usize, r: usize) -> Result<Self> {
        let cfg = Self {
            k,
            r,
            init: InitAlgorithm::default(),
            residual_tol: DEFAULT_RESIDUAL_TOL,
            filter_truncation: FilterTruncation::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 || self.r > self.k {
            return Err(Error::param(format!(
                "need 1 <= r <= k, got r = {}, k = {}",
                self.r, self.k
            )));
        }
        if !(self.residual_tol > 0.0) {
            return Err(Error::param("residual_tol must be positive"));
        }
        Ok(())
    }
}

/// Sorts `(score, index)` pairs ascending with ties to the lower index.
pub(crate) fn rank_ascending(mut pairs: Vec<(f64, usize)>) -> Vec<(f64, usize)> {
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    pairs
}

/// Sorts `(score, index)` pairs descending with ties to the lower index.
pub(crate) fn rank_descending(mut pairs: Vec<(f64, usize)>) -> Vec<(f64, usize)> {
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    pairs
}
