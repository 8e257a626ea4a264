//! Numerical evaluation of the noise-robustness theory.
//!
//! Quantities here describe how far an estimated signal subspace `S~` may
//! drift from the noiseless `S` before the generalized MUSIC step, the
//! forward sequential step or backward support filtering stop being
//! guaranteed to pick correct atoms.
//!
//! Two perturbation sizes are reported side by side:
//!
//! * `delta_op = ||S - S~ W||_2`, the basis-matrix distance after aligning
//!   `S~` to `S` with the unitary Procrustes factor `W`;
//! * `delta_proj = ||P_S - P_S~||_2`, the projector distance.
//!
//! For orthonormal bases `delta_op = 2 sin(theta / 2) >= sin(theta) =
//! delta_proj`, where `theta` is the largest principal angle. Bound checks use
//! `delta_proj`.

mod profiles;
mod semicircle;

use itertools::Itertools;
use nalgebra::DMatrix;
use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::seed::rng_from_seed;
use crate::subspace::{concat_columns, singular_values, subspace_distance, Subspace};
use crate::{Error, Result, Scalar};

pub use profiles::{
    feasibility_grid, sigma_k_profile, write_feasibility_csv, write_sigma_k_csv, FeasibilityRow,
    SigmaKProfileConfig, SigmaKRow,
};
pub use semicircle::{
    f_alpha, feasibility_gap, filtering_region, lambda1_total_mass, semicircle_cdf, semicircle_t1,
    Region,
};

/// Largest subset count evaluated exhaustively by [`sigma_tilde`].
pub const SIGMA_TILDE_EXHAUSTIVE_LIMIT: u128 = 10_000;

/// Number of random subsets drawn by [`sigma_tilde`] beyond the limit.
pub const SIGMA_TILDE_SAMPLES: usize = 10_000;

/// `k`-th largest singular value of `[A_I  S]`.
pub fn sigma_k_augmented<T: Scalar>(
    a: &DMatrix<T>,
    indices: &[usize],
    s: &Subspace<T>,
    k: usize,
) -> Result<f64> {
    if k == 0 || indices.len() + s.dim() < k {
        return Err(Error::param(format!(
            "[A_I S] has {} columns, cannot take sigma_{k}",
            indices.len() + s.dim()
        )));
    }
    let aug = concat_columns(a, indices, s.basis())?;
    let sv = singular_values(&aug);
    Ok(sv.get(k - 1).copied().unwrap_or(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PerturbationBound {
    Bounded(f64),
    Infeasible,
}

impl PerturbationBound {
    pub fn value(self) -> Option<f64> {
        match self {
            PerturbationBound::Bounded(v) => Some(v),
            PerturbationBound::Infeasible => None,
        }
    }
}

/// `delta / (sigma_k - delta)`, or [`PerturbationBound::Infeasible`] when
/// `delta >= sigma_k`.
pub fn perturbation_bound(delta: f64, sigma_k: f64) -> Result<PerturbationBound> {
    if !(delta >= 0.0) || !(sigma_k > 0.0) {
        return Err(Error::param(format!(
            "need delta >= 0 and sigma_k > 0, got {delta}, {sigma_k}"
        )));
    }
    Ok(if delta < sigma_k {
        PerturbationBound::Bounded(delta / (sigma_k - delta))
    } else {
        PerturbationBound::Infeasible
    })
}

/// `||S - S~ W||_2` with `W` the unitary minimizer of `||S - S~ W||_F`.
pub fn procrustes_distance<T: Scalar>(s: &Subspace<T>, s_tilde: &Subspace<T>) -> Result<f64> {
    if s.ambient_dim() != s_tilde.ambient_dim() || s.dim() != s_tilde.dim() {
        return Err(Error::param(
            "subspaces must share ambient dimension and rank",
        ));
    }
    let cross = s_tilde.basis().adjoint() * s.basis();
    let svd = T::thin_svd(&cross)?;
    let w = svd.u * svd.v.adjoint();
    let diff = s.basis() - s_tilde.basis() * w;
    Ok(singular_values(&diff).first().copied().unwrap_or(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub delta_op: f64,
    pub delta_proj: f64,
    pub sigma_k: f64,
    /// `delta_proj / (sigma_k - delta_proj)` when feasible.
    pub bound: Option<f64>,
    pub feasible: bool,
    /// `k / m`.
    pub gamma: f64,
    /// `r / k`.
    pub alpha: f64,
}

/// Perturbation bound for `[A_I  S~]` against the noiseless `[A_I  S]`.
pub fn bound_report<T: Scalar>(
    a: &DMatrix<T>,
    indices: &[usize],
    s: &Subspace<T>,
    s_tilde: &Subspace<T>,
    k: usize,
) -> Result<BoundReport> {
    let sigma_k = sigma_k_augmented(a, indices, s, k)?;
    let delta_proj = subspace_distance(s, s_tilde)?;
    let delta_op = procrustes_distance(s, s_tilde)?;
    let bound = perturbation_bound(delta_proj, sigma_k)?.value();
    Ok(BoundReport {
        delta_op,
        delta_proj,
        sigma_k,
        bound,
        feasible: bound.is_some(),
        gamma: k as f64 / a.nrows() as f64,
        alpha: s.dim() as f64 / k as f64,
    })
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::param(format!("gamma {gamma} outside (0, 1)")));
    }
    Ok(())
}

/// Forward condition `sigma_k / delta > 1 + 1 / (1 - gamma)`.
pub fn forward_snr_ok(sigma_k: f64, delta: f64, gamma: f64) -> Result<bool> {
    check_gamma(gamma)?;
    if delta == 0.0 {
        return Ok(true);
    }
    Ok(sigma_k / delta > 1.0 + 1.0 / (1.0 - gamma))
}

/// Backward condition `sigma~ / delta > 1 + 1 / (1 - gamma (1 + alpha))`.
pub fn backward_snr_ok(sigma_tilde: f64, delta: f64, gamma: f64, alpha: f64) -> Result<bool> {
    check_gamma(gamma)?;
    let load = gamma * (1.0 + alpha);
    if load >= 1.0 {
        return Err(Error::InfeasibleRegime(load));
    }
    if delta == 0.0 {
        return Ok(true);
    }
    Ok(sigma_tilde / delta > 1.0 + 1.0 / (1.0 - load))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaTilde {
    pub value: f64,
    /// Number of subsets evaluated.
    pub subsets: usize,
    /// `false` when the subsets were sampled rather than enumerated.
    pub exhaustive: bool,
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// `max sigma_k([A_T  S])` over `T` in the `(k - r)`-subsets of
/// `(I ∩ support) \ {q}`.
///
/// Enumerates every subset when there are at most
/// [`SIGMA_TILDE_EXHAUSTIVE_LIMIT`], otherwise evaluates
/// [`SIGMA_TILDE_SAMPLES`] uniformly drawn subsets using `sample_seed`.
#[allow(clippy::too_many_arguments)]
pub fn sigma_tilde<T: Scalar>(
    a: &DMatrix<T>,
    s: &Subspace<T>,
    indices: &[usize],
    true_support: &[usize],
    k: usize,
    r: usize,
    q: usize,
    sample_seed: u64,
) -> Result<SigmaTilde> {
    if s.dim() != r || r > k {
        return Err(Error::param(format!(
            "subspace rank {} inconsistent with r = {r}, k = {k}",
            s.dim()
        )));
    }
    let pool: Vec<usize> = indices
        .iter()
        .copied()
        .filter(|i| true_support.contains(i) && *i != q)
        .collect();
    let size = k - r;
    if pool.len() < size {
        return Err(Error::param(format!(
            "|I_C \\ {{q}}| = {} is smaller than k - r = {size}",
            pool.len()
        )));
    }
    let eval = |t: &[usize]| sigma_k_augmented(a, t, s, k);
    if binomial(pool.len(), size) <= SIGMA_TILDE_EXHAUSTIVE_LIMIT {
        let mut best = f64::NEG_INFINITY;
        let mut count = 0;
        for t in pool.iter().copied().combinations(size) {
            best = best.max(eval(&t)?);
            count += 1;
        }
        return Ok(SigmaTilde {
            value: best,
            subsets: count,
            exhaustive: true,
        });
    }
    let mut rng = rng_from_seed(sample_seed);
    let mut best = f64::NEG_INFINITY;
    for _ in 0..SIGMA_TILDE_SAMPLES {
        let t: Vec<usize> = index::sample(&mut rng, pool.len(), size)
            .into_iter()
            .map(|p| pool[p])
            .collect();
        best = best.max(eval(&t)?);
    }
    Ok(SigmaTilde {
        value: best,
        subsets: SIGMA_TILDE_SAMPLES,
        exhaustive: false,
    })
}
