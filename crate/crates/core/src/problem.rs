//! Synthetic MMV instances and their reduction to canonical form.
//!
//! Sources follow the rank-deficient factorization `X^S = Psi Lambda Phi`
//! with `Psi` a random `k x r` matrix with orthonormal columns, `Lambda =
//! diag(tau^0, ..., tau^(r-1))` and `Phi` an `r x N` Gaussian block of
//! variance `1/N`. Noise is scaled per ensemble so the Frobenius-norm SNR hits
//! its target exactly.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};
use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::seed::{mix, rng_from_seed};
use crate::subspace::{check_finite, numerical_rank, principal_subspace, Subspace};
use crate::{Error, Result, Scalar};

/// Column norms of a [`SensingMatrix`] equal one to within this tolerance.
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// Maximum number of draws before a degenerate source is reported as an error.
pub const MAX_RESAMPLES: usize = 16;

const GROUND_TRUTH_RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MatrixFamily {
    /// i.i.d. `N(mean, 1/m)` entries, columns normalized afterwards.
    Gaussian { mean: f64 },
    /// Random rows of the unitary DFT, columns normalized afterwards.
    Fourier,
}

/// Column-normalized `m x n` dictionary.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingMatrix<T: Scalar> {
    matrix: DMatrix<T>,
    family: MatrixFamily,
    seed: u64,
}

impl<T: Scalar> SensingMatrix<T> {
    /// Wraps an existing dictionary, checking finiteness and unit column norms.
    pub fn from_parts(matrix: DMatrix<T>, family: MatrixFamily, seed: u64) -> Result<Self> {
        check_finite(&matrix)?;
        for (j, c) in matrix.column_iter().enumerate() {
            if (c.norm() - 1.0).abs() > UNIT_NORM_TOL {
                return Err(Error::param(format!("column {j} does not have unit norm")));
            }
        }
        Ok(Self {
            matrix,
            family,
            seed,
        })
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn family(&self) -> MatrixFamily {
        self.family
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Submatrix `A_I`.
    pub fn columns(&self, indices: &[usize]) -> Result<DMatrix<T>> {
        for &i in indices {
            if i >= self.cols() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: self.cols(),
                });
            }
        }
        Ok(self.matrix.select_columns(indices))
    }

    /// Applies a column permutation: column `j` of the result is column
    /// `perm[j]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        Ok(Self {
            matrix: self.columns(perm)?,
            family: self.family,
            seed: self.seed,
        })
    }
}

fn check_underdetermined(m: usize, n: usize) -> Result<()> {
    if m == 0 || m >= n {
        return Err(Error::param(format!(
            "sensing matrix must satisfy 1 <= m < n, got m = {m}, n = {n}"
        )));
    }
    Ok(())
}

fn normalize_columns<T: Scalar>(mut m: DMatrix<T>) -> Result<DMatrix<T>> {
    for mut c in m.column_iter_mut() {
        let norm = c.norm();
        if norm == 0.0 {
            return Err(Error::RankDeficient("zero column in sensing matrix".into()));
        }
        c.unscale_mut(norm);
    }
    Ok(m)
}

/// The raw Gaussian draw behind [`gen_gaussian_sensing`], before normalization.
pub fn gaussian_raw(m: usize, n: usize, mean: f64, seed: u64) -> Result<DMatrix<f64>> {
    check_underdetermined(m, n)?;
    if !mean.is_finite() {
        return Err(Error::param("mean must be finite"));
    }
    let mut rng = rng_from_seed(seed);
    let var = 1.0 / m as f64;
    Ok(DMatrix::from_fn(m, n, |_, _| {
        mean + f64::sample_normal(&mut rng, var)
    }))
}

/// Gaussian `N(mean, 1/m)` dictionary with unit-norm columns.
pub fn gen_gaussian_sensing(
    m: usize,
    n: usize,
    mean: f64,
    seed: u64,
) -> Result<SensingMatrix<f64>> {
    let raw = gaussian_raw(m, n, mean, seed)?;
    Ok(SensingMatrix {
        matrix: normalize_columns(raw)?,
        family: MatrixFamily::Gaussian { mean },
        seed,
    })
}

/// Entry `(p, q)` of the unitary `n`-point DFT matrix.
pub fn dft_entry(n: usize, p: usize, q: usize) -> Complex<f64> {
    let phase = -2.0 * PI * ((p * q) % n) as f64 / n as f64;
    Complex::from_polar(1.0 / (n as f64).sqrt(), phase)
}

/// Rows of the unitary DFT chosen uniformly without replacement, sorted.
pub fn fourier_rows(m: usize, n: usize, seed: u64) -> Result<Vec<usize>> {
    check_underdetermined(m, n)?;
    let mut rng = rng_from_seed(seed);
    let mut rows = index::sample(&mut rng, n, m).into_vec();
    rows.sort_unstable();
    Ok(rows)
}

/// Partial-DFT dictionary with unit-norm columns.
pub fn gen_fourier_sensing(m: usize, n: usize, seed: u64) -> Result<SensingMatrix<Complex<f64>>> {
    let rows = fourier_rows(m, n, seed)?;
    let raw = DMatrix::from_fn(m, n, |i, j| dft_entry(n, rows[i], j));
    Ok(SensingMatrix {
        matrix: normalize_columns(raw)?,
        family: MatrixFamily::Fourier,
        seed,
    })
}

/// Jointly sparse source: `X` restricted to its support rows.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth<T: Scalar> {
    pub n: usize,
    /// Sorted support indices.
    pub support: Vec<usize>,
    /// `k x N` nonzero rows of `X`, aligned with `support`.
    pub coeffs: DMatrix<T>,
    pub rank: usize,
    pub tau: f64,
    /// Number of degenerate draws rejected before this one.
    pub resamples: usize,
}

impl<T: Scalar> GroundTruth<T> {
    pub fn k(&self) -> usize {
        self.support.len()
    }

    pub fn snapshots(&self) -> usize {
        self.coeffs.ncols()
    }

    /// The full `n x N` row-sparse matrix `X`.
    pub fn full(&self) -> DMatrix<T> {
        let mut x = DMatrix::zeros(self.n, self.snapshots());
        for (row, &i) in self.support.iter().enumerate() {
            x.set_row(i, &self.coeffs.row(row));
        }
        x
    }
}

/// `Lambda = diag(tau^0, ..., tau^(r-1))`.
pub fn condition_profile(tau: f64, r: usize) -> Vec<f64> {
    (0..r).map(|j| tau.powi(j as i32)).collect()
}

/// `k x r` matrix with orthonormal columns drawn from the Gaussian QR.
fn random_orthonormal<T: Scalar>(
    k: usize,
    r: usize,
    rng: &mut impl rand::Rng,
) -> Option<DMatrix<T>> {
    let g = DMatrix::from_fn(k, r, |_, _| T::sample_normal(rng, 1.0));
    let qr = g.qr();
    let rdiag = qr.r().diagonal();
    if rdiag.iter().any(|x| x.modulus() < 1e-12) {
        return None;
    }
    Some(qr.q())
}

pub fn gen_ground_truth<T: Scalar>(
    n: usize,
    k: usize,
    r: usize,
    snapshots: usize,
    tau: f64,
    seed: u64,
) -> Result<GroundTruth<T>> {
    if r == 0 || r > k || k > n {
        return Err(Error::param(format!(
            "need 1 <= r <= k <= n, got r = {r}, k = {k}, n = {n}"
        )));
    }
    if r > snapshots {
        return Err(Error::param(format!(
            "rank {r} exceeds snapshot count {snapshots}"
        )));
    }
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::param(format!("tau {tau} outside (0, 1]")));
    }
    let lambda = condition_profile(tau, r);
    for attempt in 0..MAX_RESAMPLES {
        let mut rng = rng_from_seed(mix(seed, attempt as u64));
        let mut support = index::sample(&mut rng, n, k).into_vec();
        support.sort_unstable();
        let Some(mut psi) = random_orthonormal::<T>(k, r, &mut rng) else {
            continue;
        };
        for (j, &l) in lambda.iter().enumerate() {
            psi.column_mut(j).scale_mut(l);
        }
        let var = 1.0 / snapshots as f64;
        let phi = DMatrix::from_fn(r, snapshots, |_, _| T::sample_normal(&mut rng, var));
        let coeffs = psi * phi;
        let zero_row = coeffs.row_iter().any(|row| row.norm() == 0.0);
        if zero_row || numerical_rank(&coeffs, GROUND_TRUTH_RANK_TOL)? != r {
            continue;
        }
        return Ok(GroundTruth {
            n,
            support,
            coeffs,
            rank: r,
            tau,
            resamples: attempt,
        });
    }
    Err(Error::ResampleExhausted(MAX_RESAMPLES))
}

/// Observation `Y = A X + W`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementEnsemble<T: Scalar> {
    pub y: DMatrix<T>,
    /// Noiseless part `B = A X`.
    pub clean: DMatrix<T>,
    /// `f64::INFINITY` for noiseless ensembles.
    pub snr_db: f64,
    pub noise_seed: u64,
}

/// Adds white Gaussian noise with `20 log10(||B||_F / ||W||_F) = snr_db`.
pub fn synthesize<T: Scalar>(
    a: &SensingMatrix<T>,
    gt: &GroundTruth<T>,
    snr_db: f64,
    seed: u64,
) -> Result<MeasurementEnsemble<T>> {
    if gt.n != a.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            actual: gt.n,
        });
    }
    if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
        return Err(Error::param(format!("snr_db {snr_db} is not usable")));
    }
    let clean = a.columns(&gt.support)? * &gt.coeffs;
    let mut y = clean.clone();
    if snr_db.is_finite() {
        let mut rng = rng_from_seed(seed);
        let mut w = DMatrix::from_fn(clean.nrows(), clean.ncols(), |_, _| {
            T::sample_normal(&mut rng, 1.0)
        });
        let target = clean.norm() * 10f64.powf(-snr_db / 20.0);
        let scale = target / w.norm();
        w.scale_mut(scale);
        y += w;
    }
    Ok(MeasurementEnsemble {
        y,
        clean,
        snr_db,
        noise_seed: seed,
    })
}

/// Sensing matrix plus an orthonormal rank-`r` signal subspace estimate.
#[derive(Debug, Clone)]
pub struct CanonicalProblem<'a, T: Scalar> {
    pub sensing: &'a SensingMatrix<T>,
    pub signal: Subspace<T>,
    pub r: usize,
}

pub fn canonicalize<'a, T: Scalar>(
    a: &'a SensingMatrix<T>,
    ens: &MeasurementEnsemble<T>,
    r: usize,
) -> Result<CanonicalProblem<'a, T>> {
    if ens.y.nrows() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            actual: ens.y.nrows(),
        });
    }
    let signal = principal_subspace(&ens.y, r)?;
    Ok(CanonicalProblem {
        sensing: a,
        signal,
        r,
    })
}

/// A generated instance with the seeds that produced it.
#[derive(Debug, Clone)]
pub struct Instance<T: Scalar> {
    pub sensing: SensingMatrix<T>,
    pub truth: GroundTruth<T>,
    pub ensemble: MeasurementEnsemble<T>,
}
