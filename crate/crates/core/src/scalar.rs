use faer::Mat;
use nalgebra::{Complex, ComplexField, DMatrix};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Scalar field of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

/// Entry type shared by every matrix in the crate: `f64` or `Complex<f64>`.
pub trait Scalar: ComplexField<RealField = f64> + Copy {
    const FIELD: Field;

    /// Zero-mean draw with `E|x|^2 = variance`. Complex draws are circular.
    fn sample_normal<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Self;

    /// Builds a value from real and imaginary parts. Real scalars drop `im`.
    fn from_parts(re: f64, im: f64) -> Self;

    /// Thin SVD with singular values in non-increasing order.
    fn thin_svd(m: &DMatrix<Self>) -> Result<ThinSvd<Self>>;
}

/// `m = U diag(s) V^H` with `min(rows, cols)` columns in `U` and `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThinSvd<T: Scalar> {
    pub u: DMatrix<T>,
    pub s: Vec<f64>,
    pub v: DMatrix<T>,
}

// nalgebra's bidiagonal SVD loses accuracy on exactly rank-deficient input
// (noiseless observations are), so decompositions go through faer.
macro_rules! faer_svd {
    ($m:expr, $re:expr) => {{
        let m = $m;
        let (rows, cols) = m.shape();
        let d = rows.min(cols);
        if d == 0 {
            return Ok(ThinSvd {
                u: DMatrix::zeros(rows, 0),
                s: Vec::new(),
                v: DMatrix::zeros(cols, 0),
            });
        }
        let f = Mat::from_fn(rows, cols, |i, j| m[(i, j)]);
        let svd = f
            .thin_svd()
            .map_err(|e| Error::RankDeficient(format!("SVD did not converge: {e:?}")))?;
        let (fu, fv, fs) = (svd.U(), svd.V(), svd.S().column_vector());
        Ok(ThinSvd {
            u: DMatrix::from_fn(rows, d, |i, j| fu[(i, j)]),
            s: (0..d).map(|i| $re(fs[i])).collect(),
            v: DMatrix::from_fn(cols, d, |i, j| fv[(i, j)]),
        })
    }};
}

impl Scalar for f64 {
    const FIELD: Field = Field::Real;

    fn sample_normal<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Self {
        let z: f64 = rng.sample(StandardNormal);
        z * variance.sqrt()
    }

    fn from_parts(re: f64, _im: f64) -> Self {
        re
    }

    fn thin_svd(m: &DMatrix<Self>) -> Result<ThinSvd<Self>> {
        faer_svd!(m, |x: f64| x)
    }
}

impl Scalar for Complex<f64> {
    const FIELD: Field = Field::Complex;

    fn sample_normal<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Self {
        let s = (variance / 2.0).sqrt();
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(re * s, im * s)
    }

    fn from_parts(re: f64, im: f64) -> Self {
        Complex::new(re, im)
    }

    fn thin_svd(m: &DMatrix<Self>) -> Result<ThinSvd<Self>> {
        faer_svd!(m, |x: Complex<f64>| x.re)
    }
}
