use super::{rank_ascending, SupportEstimate, AUGMENTED_RANK_TOL};
use crate::problem::SensingMatrix;
use crate::subspace::{concat_columns, numerical_rank, principal_subspace, Subspace};
use crate::{Error, Result, Scalar};

/// Picks the `count` atoms outside `exclude` with the smallest residual
/// energy against `s`.
pub(crate) fn smallest_residuals<T: Scalar>(
    a: &SensingMatrix<T>,
    s: &Subspace<T>,
    exclude: &[usize],
    count: usize,
) -> Result<SupportEstimate> {
    let resid = s.residual_energies(a.matrix())?;
    let pairs = resid
        .into_iter()
        .enumerate()
        .filter(|(j, _)| !exclude.contains(j))
        .map(|(j, e)| (e, j))
        .collect();
    let (scores, indices) = rank_ascending(pairs).into_iter().take(count).unzip();
    Ok(SupportEstimate { indices, scores })
}

/// Classical MUSIC: the `k` atoms closest to the signal subspace `u`.
pub fn music<T: Scalar>(
    a: &SensingMatrix<T>,
    u: &Subspace<T>,
    k: usize,
) -> Result<SupportEstimate> {
    if k > a.cols() {
        return Err(Error::param(format!(
            "cannot select {k} of {} atoms",
            a.cols()
        )));
    }
    smallest_residuals(a, u, &[], k)
}

/// Generalized MUSIC (the CS-MUSIC completion step).
///
/// Forms the augmented signal subspace `R([A_partial  U])`, which must have
/// dimension `k`, and completes `partial` with the `r` remaining atoms of
/// smallest residual energy against it in a single batch. The returned
/// scores are those residuals; entries of `partial` carry a score of zero.
pub fn generalized_music<T: Scalar>(
    a: &SensingMatrix<T>,
    u: &Subspace<T>,
    partial: &SupportEstimate,
    k: usize,
) -> Result<SupportEstimate> {
    let r = u.dim();
    if r > k || partial.len() != k - r {
        return Err(Error::param(format!(
            "partial support has {} entries, expected k - r = {}",
            partial.len(),
            k.saturating_sub(r)
        )));
    }
    let aug = concat_columns(a.matrix(), &partial.indices, u.basis())?;
    let rank = numerical_rank(&aug, AUGMENTED_RANK_TOL)?;
    if rank < k {
        return Err(Error::IllPosedAugmentation { rank, expected: k });
    }
    let q = principal_subspace(&aug, k)?;
    let rest = smallest_residuals(a, &q, &partial.indices, r)?;

    let mut indices = partial.indices.clone();
    let mut scores = vec![0.0; partial.len()];
    indices.extend(rest.indices);
    scores.extend(rest.scores);
    Ok(SupportEstimate { indices, scores })
}
