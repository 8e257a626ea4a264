//! Dense subspace primitives.
//!
//! Every criterion used by the recovery algorithms is expressed through the
//! handful of operations here: an orthonormal basis for a column space, the
//! energy of a vector outside a subspace, a relative-threshold numerical rank,
//! and the projector-difference distance between two subspaces.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result, Scalar};

/// Orthonormality tolerance for [`Subspace`] bases.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Default relative tolerance for noiseless rank oracles.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Span of an orthonormal set of columns in `T^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<T: Scalar> {
    basis: DMatrix<T>,
}

impl<T: Scalar> Subspace<T> {
    /// Wraps `basis`, checking `basis^H basis = I` within [`ORTHONORMAL_TOL`].
    pub fn from_orthonormal(basis: DMatrix<T>) -> Result<Self> {
        check_finite(&basis)?;
        let gram = basis.adjoint() * &basis;
        let d = basis.ncols();
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { 1.0 } else { 0.0 };
                if (gram[(i, j)] - T::from_real(target)).modulus() > ORTHONORMAL_TOL {
                    return Err(Error::param("basis columns are not orthonormal"));
                }
            }
        }
        Ok(Self { basis })
    }

    pub(crate) fn from_orthonormal_unchecked(basis: DMatrix<T>) -> Self {
        Self { basis }
    }

    /// Orthonormal basis of the numerical column space of `m`.
    pub fn column_space(m: &DMatrix<T>, rel_tol: f64) -> Result<Self> {
        let rank = numerical_rank(m, rel_tol)?;
        if rank == 0 {
            return Ok(Self {
                basis: DMatrix::zeros(m.nrows(), 0),
            });
        }
        principal_subspace(m, rank)
    }

    /// Coordinate subspace spanned by the unit vectors `e_i`, `i` in `axes`.
    pub fn coordinate(ambient_dim: usize, axes: &[usize]) -> Result<Self> {
        let mut basis = DMatrix::zeros(ambient_dim, axes.len());
        for (c, &i) in axes.iter().enumerate() {
            if i >= ambient_dim {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: ambient_dim,
                });
            }
            basis[(i, c)] = T::one();
        }
        Self::from_orthonormal(basis)
    }

    pub fn basis(&self) -> &DMatrix<T> {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Explicit `m x m` orthogonal projector `Q Q^H`.
    pub fn projector(&self) -> DMatrix<T> {
        &self.basis * self.basis.adjoint()
    }

    /// Orthogonal projection of `a` onto the subspace.
    pub fn project(&self, a: &DVector<T>) -> Result<DVector<T>> {
        self.check_len(a.len())?;
        Ok(&self.basis * (self.basis.adjoint() * a))
    }

    /// `||(I - QQ^H) a_j||^2` for every column `a_j` of `m`.
    pub fn residual_energies(&self, m: &DMatrix<T>) -> Result<Vec<f64>> {
        self.check_len(m.nrows())?;
        let resid = m - &self.basis * (self.basis.adjoint() * m);
        Ok(resid.column_iter().map(|c| c.norm_squared()).collect())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                actual: len,
            });
        }
        Ok(())
    }
}

pub fn check_finite<T: Scalar>(m: &DMatrix<T>) -> Result<()> {
    if m.iter()
        .all(|x| x.real().is_finite() && x.imaginary().is_finite())
    {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Singular values in non-increasing order; NaN if the SVD fails to converge.
pub fn singular_values<T: Scalar>(m: &DMatrix<T>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    match T::thin_svd(m) {
        Ok(svd) => svd.s,
        Err(_) => vec![f64::NAN; m.nrows().min(m.ncols())],
    }
}

/// Span of the `d` leading left singular vectors of `m`.
pub fn principal_subspace<T: Scalar>(m: &DMatrix<T>, d: usize) -> Result<Subspace<T>> {
    let limit = m.nrows().min(m.ncols());
    if d == 0 || d > limit {
        return Err(Error::param(format!(
            "subspace dimension {d} outside 1..={limit}"
        )));
    }
    check_finite(m)?;
    let svd = T::thin_svd(m)?;
    let basis = svd.u.columns(0, d).into_owned();
    Ok(Subspace::from_orthonormal_unchecked(basis))
}

/// `||(I - QQ^H) a||^2` for the basis `Q` of `s`.
pub fn residual_energy<T: Scalar>(s: &Subspace<T>, a: &DVector<T>) -> Result<f64> {
    s.check_len(a.len())?;
    let resid = a - s.basis() * (s.basis().adjoint() * a);
    Ok(resid.norm_squared())
}

/// Number of singular values strictly above `rel_tol * sigma_1`.
pub fn numerical_rank<T: Scalar>(m: &DMatrix<T>, rel_tol: f64) -> Result<usize> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::param(format!("rel_tol {rel_tol} outside (0, 1)")));
    }
    check_finite(m)?;
    let s = singular_values(m);
    let Some(&top) = s.first() else {
        return Ok(0);
    };
    if top == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&x| x > rel_tol * top).count())
}

/// Spectral norm of `P_1 - P_2`; the sine of the largest principal angle
/// when the dimensions agree.
pub fn subspace_distance<T: Scalar>(s1: &Subspace<T>, s2: &Subspace<T>) -> Result<f64> {
    if s1.ambient_dim() != s2.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: s1.ambient_dim(),
            actual: s2.ambient_dim(),
        });
    }
    let diff = s1.projector() - s2.projector();
    Ok(singular_values(&diff).first().copied().unwrap_or(0.0))
}

/// `[M_I  B]`: the columns of `m` listed in `indices`, followed by `b`.
pub fn concat_columns<T: Scalar>(
    m: &DMatrix<T>,
    indices: &[usize],
    b: &DMatrix<T>,
) -> Result<DMatrix<T>> {
    if b.nrows() != m.nrows() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            actual: b.nrows(),
        });
    }
    for &i in indices {
        if i >= m.ncols() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: m.ncols(),
            });
        }
    }
    let rows = m.nrows();
    let left = indices.len();
    Ok(DMatrix::from_fn(rows, left + b.ncols(), |i, c| {
        if c < left {
            m[(i, indices[c])]
        } else {
            b[(i, c - left)]
        }
    }))
}

/// Numerical rank of `[A_I  B]`.
pub fn augmented_rank<T: Scalar>(
    a: &DMatrix<T>,
    indices: &[usize],
    b: &DMatrix<T>,
    rel_tol: f64,
) -> Result<usize> {
    numerical_rank(&concat_columns(a, indices, b)?, rel_tol)
}
