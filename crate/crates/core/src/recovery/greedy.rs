use nalgebra::{DMatrix, DVector};

use super::{rank_descending, SupportEstimate};
use crate::problem::SensingMatrix;
use crate::subspace::Subspace;
use crate::{Error, Result, Scalar};

/// Removes the component along unit vector `q` from every column of `m`.
fn deflate<T: Scalar>(m: &mut DMatrix<T>, q: &DVector<T>) {
    let coeffs = q.adjoint() * &*m;
    *m -= q * coeffs;
}

/// Subspace S-OMP.
///
/// Greedily picks `t` atoms. With `p_j = (I - P_{R(A_I)}) a_j` the residual of
/// atom `j` against the atoms chosen so far, each step selects the `j` that
/// maximizes `||Q_U^H p_j||^2 / ||p_j||^2`. Atoms whose residual energy falls
/// below `residual_tol * ||a_j||^2` are not eligible.
pub fn subspace_s_omp<T: Scalar>(
    a: &SensingMatrix<T>,
    u: &Subspace<T>,
    t: usize,
    residual_tol: f64,
) -> Result<SupportEstimate> {
    let (m, n) = (a.rows(), a.cols());
    if u.ambient_dim() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: u.ambient_dim(),
        });
    }
    if t > m {
        return Err(Error::param(format!(
            "cannot select {t} atoms with m = {m}"
        )));
    }
    let norms: Vec<f64> = a.matrix().column_iter().map(|c| c.norm_squared()).collect();
    let mut resid = a.matrix().clone();
    let mut chosen = vec![false; n];
    let mut indices = Vec::with_capacity(t);
    let mut scores = Vec::with_capacity(t);

    for _ in 0..t {
        let corr = u.basis().adjoint() * &resid;
        let mut best: Option<(f64, usize)> = None;
        for j in (0..n).filter(|&j| !chosen[j]) {
            let pn = resid.column(j).norm_squared();
            if pn < residual_tol * norms[j] {
                continue;
            }
            let score = corr.column(j).norm_squared() / pn;
            if best.is_none_or(|(s, _)| score > s) {
                best = Some((score, j));
            }
        }
        let (score, j) = best.ok_or(Error::DegenerateDictionary)?;
        chosen[j] = true;
        indices.push(j);
        scores.push(score);

        let q = resid.column(j).normalize();
        deflate(&mut resid, &q);
        resid.column_mut(j).fill(T::zero());
    }
    Ok(SupportEstimate { indices, scores })
}

/// Simultaneous OMP on the raw observations.
///
/// Each step picks the atom with the largest `||a_j^H R||^2`, where `R` is
/// the residual of `Y` after projecting out the chosen atoms.
pub fn s_omp<T: Scalar>(
    a: &SensingMatrix<T>,
    y: &DMatrix<T>,
    t: usize,
    residual_tol: f64,
) -> Result<SupportEstimate> {
    let (m, n) = (a.rows(), a.cols());
    if y.nrows() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: y.nrows(),
        });
    }
    if t > m {
        return Err(Error::param(format!(
            "cannot select {t} atoms with m = {m}"
        )));
    }
    let norms: Vec<f64> = a.matrix().column_iter().map(|c| c.norm_squared()).collect();
    let mut atoms = a.matrix().clone();
    let mut resid = y.clone();
    let mut chosen = vec![false; n];
    let mut indices = Vec::with_capacity(t);
    let mut scores = Vec::with_capacity(t);

    for _ in 0..t {
        let corr = a.matrix().adjoint() * &resid;
        let mut best: Option<(f64, usize)> = None;
        for j in (0..n).filter(|&j| !chosen[j]) {
            if atoms.column(j).norm_squared() < residual_tol * norms[j] {
                continue;
            }
            let score = corr.row(j).norm_squared();
            if best.is_none_or(|(s, _)| score > s) {
                best = Some((score, j));
            }
        }
        let (score, j) = best.ok_or(Error::DegenerateDictionary)?;
        chosen[j] = true;
        indices.push(j);
        scores.push(score);

        let q = atoms.column(j).normalize();
        deflate(&mut atoms, &q);
        deflate(&mut resid, &q);
        atoms.column_mut(j).fill(T::zero());
    }
    Ok(SupportEstimate { indices, scores })
}

/// One-shot thresholding: the `t` atoms with the largest `||Q_U^H a_j||^2`,
/// in decreasing score order.
pub fn two_thresholding<T: Scalar>(
    a: &SensingMatrix<T>,
    u: &Subspace<T>,
    t: usize,
) -> Result<SupportEstimate> {
    if u.ambient_dim() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            actual: u.ambient_dim(),
        });
    }
    if t > a.cols() {
        return Err(Error::param(format!(
            "cannot select {t} of {} atoms",
            a.cols()
        )));
    }
    let corr = u.basis().adjoint() * a.matrix();
    let pairs = corr
        .column_iter()
        .enumerate()
        .map(|(j, c)| (c.norm_squared(), j))
        .collect();
    let (scores, indices) = rank_descending(pairs).into_iter().take(t).unzip();
    Ok(SupportEstimate { indices, scores })
}
