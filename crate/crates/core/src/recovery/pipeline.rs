use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{
    generalized_music, music, s_omp, seq_subspace, subspace_s_omp, support_filtering,
    two_thresholding, InitAlgorithm, RecoveryConfig, SupportEstimate,
};
use crate::problem::{canonicalize, MeasurementEnsemble, SensingMatrix};
use crate::subspace::Subspace;
use crate::{Error, Result, Scalar};

/// Support recovery algorithms available to the benchmark harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// Initial estimate, support filtering, sequential subspace estimation.
    SeqCsMusic,
    /// `k - r` greedy picks completed by one generalized MUSIC batch.
    CsMusic,
    /// Sequential subspace estimation from `k - r` greedy picks, no filtering.
    SeqNoFilter,
    /// Simultaneous OMP on the observations.
    SOmp,
    /// Subspace S-OMP run for all `k` atoms.
    SsOmp,
    /// Classical MUSIC against the rank-`r` signal subspace.
    Music,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::SeqCsMusic,
        Algorithm::CsMusic,
        Algorithm::SeqNoFilter,
        Algorithm::SOmp,
        Algorithm::SsOmp,
        Algorithm::Music,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::SeqCsMusic => "seq_cs_music",
            Algorithm::CsMusic => "cs_music",
            Algorithm::SeqNoFilter => "seq_no_filter",
            Algorithm::SOmp => "s_omp",
            Algorithm::SsOmp => "ss_omp",
            Algorithm::Music => "music",
        }
    }

    /// Runs the algorithm on observations `y` with signal subspace `u`.
    pub fn run<T: Scalar>(
        self,
        a: &SensingMatrix<T>,
        y: &DMatrix<T>,
        u: &Subspace<T>,
        cfg: &RecoveryConfig,
    ) -> Result<AlgorithmOutput> {
        cfg.validate()?;
        let (k, r) = (cfg.k, cfg.r);
        if u.dim() != r {
            return Err(Error::param(format!(
                "signal subspace has dimension {}, config says r = {r}",
                u.dim()
            )));
        }
        let initial = |t: usize| match cfg.init {
            InitAlgorithm::SubspaceSomp => subspace_s_omp(a, u, t, cfg.residual_tol),
            InitAlgorithm::TwoThresholding => two_thresholding(a, u, t),
        };
        let mut out = AlgorithmOutput::default();
        out.estimate = match self {
            Algorithm::SeqCsMusic => {
                let init = initial(k)?;
                out.truncation = cfg.filter_truncation.bound(k, r, a.rows());
                let filtered = support_filtering(a, u, &init, k, out.truncation)?;
                let est = seq_subspace(a, u, &filtered, k)?;
                out.init = Some(init);
                out.filtered = Some(filtered);
                est
            }
            Algorithm::CsMusic => {
                let init = initial(k - r)?;
                let est = generalized_music(a, u, &init, k)?;
                out.init = Some(init);
                est
            }
            Algorithm::SeqNoFilter => {
                let init = initial(k - r)?;
                let est = seq_subspace(a, u, &init, k)?;
                out.init = Some(init);
                est
            }
            Algorithm::SOmp => s_omp(a, y, k, cfg.residual_tol)?,
            Algorithm::SsOmp => subspace_s_omp(a, u, k, cfg.residual_tol)?,
            Algorithm::Music => music(a, u, k)?,
        };
        Ok(out)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Algorithm::ALL.iter().map(|a| a.name()).collect();
                Error::param(format!(
                    "unknown algorithm `{s}` (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// Final estimate plus the intermediate stages that produced it.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AlgorithmOutput {
    pub estimate: SupportEstimate,
    pub init: Option<SupportEstimate>,
    pub filtered: Option<SupportEstimate>,
    /// Filtering truncation bound, when one was applied.
    pub truncation: Option<usize>,
}

/// Sequential CS-MUSIC on a measurement ensemble.
pub fn seq_cs_music<T: Scalar>(
    a: &SensingMatrix<T>,
    ens: &MeasurementEnsemble<T>,
    cfg: &RecoveryConfig,
) -> Result<AlgorithmOutput> {
    let canonical = canonicalize(a, ens, cfg.r)?;
    Algorithm::SeqCsMusic.run(a, &ens.y, &canonical.signal, cfg)
}

/// Least-squares rows of `X` on a fixed support: `pinv(A_S) Y`.
pub fn least_squares_coefficients<T: Scalar>(
    a: &SensingMatrix<T>,
    support: &[usize],
    y: &DMatrix<T>,
) -> Result<DMatrix<T>> {
    let sub = a.columns(support)?;
    if y.nrows() != sub.nrows() {
        return Err(Error::DimensionMismatch {
            expected: sub.nrows(),
            actual: y.nrows(),
        });
    }
    let svd = T::thin_svd(&sub)?;
    let cutoff = svd.s.first().copied().unwrap_or(0.0) * 1e-12;
    let mut coords = svd.u.adjoint() * y;
    for (i, &s) in svd.s.iter().enumerate() {
        let inv = if s > cutoff { 1.0 / s } else { 0.0 };
        coords.row_mut(i).scale_mut(inv);
    }
    Ok(svd.v * coords)
}
