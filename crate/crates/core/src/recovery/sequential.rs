//! Forward sequential subspace estimation and backward support filtering.

use super::{rank_ascending, SupportEstimate, AUGMENTED_RANK_TOL};
use crate::problem::SensingMatrix;
use crate::subspace::{concat_columns, principal_subspace, residual_energy, Subspace};
use crate::{Error, Result, Scalar};

/// Forward greedy completion of `init` to `k` atoms.
///
/// Each step takes the `k` leading left singular vectors `U_1` of
/// `[A_I  U]`, adds the atom outside `I` with the smallest
/// `||(I - P_{R(U_1)}) a_j||^2`, and re-estimates the subspace with the
/// enlarged `I`. Scores are the residuals of the added atoms; entries of
/// `init` keep their incoming scores.
pub fn seq_subspace<T: Scalar>(
    a: &SensingMatrix<T>,
    u: &Subspace<T>,
    init: &SupportEstimate,
    k: usize,
) -> Result<SupportEstimate> {
    let r = u.dim();
    if a.rows() < k {
        return Err(Error::RankDeficient(format!(
            "leading {k}-dimensional subspace undefined with m = {}",
            a.rows()
        )));
    }
    if init.len() > k || init.len() + r < k {
        return Err(Error::param(format!(
            "initial support size {} outside k - r..=k = {}..={k}",
            init.len(),
            k.saturating_sub(r)
        )));
    }
    let mut est = init.clone();
    while est.len() < k {
        let aug = concat_columns(a.matrix(), &est.indices, u.basis())?;
        let leading = principal_subspace(&aug, k)?;
        let resid = leading.residual_energies(a.matrix())?;
        let pick = resid
            .into_iter()
            .enumerate()
            .filter(|(j, _)| !est.indices.contains(j))
            .map(|(j, e)| (e, j))
            .min_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)))
            .ok_or_else(|| Error::param("no candidate atoms left"))?;
        est.indices.push(pick.1);
        est.scores.push(pick.0);
    }
    Ok(est)
}

/// `zeta(j) = ||(I - P_{R([A_{I\{j}}  U])}) a_j||^2` for every `j` in
/// `indices`, in input order.
///
/// The augmented matrix is reduced to its numerical column space first; it
/// is expected to be rank deficient when `indices` holds several true atoms.
pub fn filtering_scores<T: Scalar>(
    a: &SensingMatrix<T>,
    u: &Subspace<T>,
    indices: &[usize],
) -> Result<Vec<f64>> {
    indices
        .iter()
        .enumerate()
        .map(|(pos, &j)| {
            let others: Vec<usize> = indices
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != pos)
                .map(|(_, &i)| i)
                .collect();
            let aug = concat_columns(a.matrix(), &others, u.basis())?;
            let span = Subspace::column_space(&aug, AUGMENTED_RANK_TOL)?;
            residual_energy(&span, &a.matrix().column(j).into_owned())
        })
        .collect()
}

/// Backward support filtering.
///
/// Optionally truncates `estimate` to its first `truncation` entries, scores
/// each remaining index by [`filtering_scores`] and keeps the `k - r`
/// smallest, in ascending score order.
pub fn support_filtering<T: Scalar>(
    a: &SensingMatrix<T>,
    u: &Subspace<T>,
    estimate: &SupportEstimate,
    k: usize,
    truncation: Option<usize>,
) -> Result<SupportEstimate> {
    let r = u.dim();
    if r > k {
        return Err(Error::param(format!("subspace rank {r} exceeds k = {k}")));
    }
    let keep = k - r;
    if keep == 0 {
        return Ok(SupportEstimate::empty());
    }
    let len = truncation.map_or(estimate.len(), |t| t.min(estimate.len()));
    let candidates = &estimate.indices[..len];
    if len <= keep {
        return Err(Error::param(format!(
            "support filtering needs more than k - r = {keep} candidates, got {len}"
        )));
    }
    let zeta = filtering_scores(a, u, candidates)?;
    let pairs = zeta.into_iter().zip(candidates.iter().copied()).collect();
    let (scores, indices) = rank_ascending(pairs).into_iter().take(keep).unzip();
    Ok(SupportEstimate { indices, scores })
}
