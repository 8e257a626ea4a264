//! Instance dump container.
//!
//! A JSON document holding the sensing matrix, the ground truth and the
//! measurements of one instance, with every matrix stored column-major as
//! separate real and imaginary arrays. `f64` values are written with the
//! shortest round-tripping representation and parsed back exactly, so a dump
//! reproduces the instance bit for bit.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::problem::{GroundTruth, Instance, MatrixFamily, MeasurementEnsemble, SensingMatrix};
use crate::{Error, Field, Result, Scalar};

pub const DUMP_FORMAT: &str = "seqmusic-instance";
pub const DUMP_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Real parts, column-major.
    pub re: Vec<f64>,
    /// Imaginary parts, column-major; absent for real matrices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
}

impl DumpMatrix {
    pub fn from_matrix<T: Scalar>(m: &DMatrix<T>) -> Self {
        let re = m.iter().map(|x| x.real()).collect();
        let im = match T::FIELD {
            Field::Real => None,
            Field::Complex => Some(m.iter().map(|x| x.imaginary()).collect()),
        };
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            re,
            im,
        }
    }

    pub fn to_matrix<T: Scalar>(&self) -> Result<DMatrix<T>> {
        let len = self.rows * self.cols;
        if self.re.len() != len {
            return Err(Error::Dump(format!(
                "expected {len} real entries, found {}",
                self.re.len()
            )));
        }
        let im = match (&self.im, T::FIELD) {
            (Some(im), Field::Complex) if im.len() == len => Some(im),
            (None, Field::Real) => None,
            _ => {
                return Err(Error::Dump(
                    "imaginary part does not match the field".into(),
                ))
            }
        };
        let data = (0..len)
            .map(|i| T::from_parts(self.re[i], im.map_or(0.0, |v| v[i])))
            .collect::<Vec<_>>();
        Ok(DMatrix::from_vec(self.rows, self.cols, data))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpMeta {
    pub field: Field,
    pub family: MatrixFamily,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub snapshots: usize,
    /// `None` encodes an infinite SNR.
    pub snr_db: Option<f64>,
    pub tau: f64,
    pub matrix_seed: u64,
    pub truth_seed: u64,
    pub noise_seed: u64,
    pub resamples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDump {
    pub format: String,
    pub version: u32,
    pub meta: DumpMeta,
    pub sensing: DumpMatrix,
    pub support: Vec<usize>,
    pub coeffs: DumpMatrix,
    pub clean: DumpMatrix,
    pub y: DumpMatrix,
}

impl InstanceDump {
    pub fn capture<T: Scalar>(inst: &Instance<T>, truth_seed: u64) -> Self {
        let a = &inst.sensing;
        let gt = &inst.truth;
        let ens = &inst.ensemble;
        Self {
            format: DUMP_FORMAT.into(),
            version: DUMP_VERSION,
            meta: DumpMeta {
                field: T::FIELD,
                family: a.family(),
                m: a.rows(),
                n: a.cols(),
                k: gt.k(),
                r: gt.rank,
                snapshots: gt.snapshots(),
                snr_db: ens.snr_db.is_finite().then_some(ens.snr_db),
                tau: gt.tau,
                matrix_seed: a.seed(),
                truth_seed,
                noise_seed: ens.noise_seed,
                resamples: gt.resamples,
            },
            sensing: DumpMatrix::from_matrix(a.matrix()),
            support: gt.support.clone(),
            coeffs: DumpMatrix::from_matrix(&gt.coeffs),
            clean: DumpMatrix::from_matrix(&ens.clean),
            y: DumpMatrix::from_matrix(&ens.y),
        }
    }

    pub fn restore<T: Scalar>(&self) -> Result<Instance<T>> {
        if self.format != DUMP_FORMAT || self.version != DUMP_VERSION {
            return Err(Error::Dump(format!(
                "unsupported container {} v{}",
                self.format, self.version
            )));
        }
        if self.meta.field != T::FIELD {
            return Err(Error::Dump(format!(
                "dump holds a {:?} instance",
                self.meta.field
            )));
        }
        let sensing = SensingMatrix::from_parts(
            self.sensing.to_matrix()?,
            self.meta.family,
            self.meta.matrix_seed,
        )?;
        let truth = GroundTruth {
            n: self.meta.n,
            support: self.support.clone(),
            coeffs: self.coeffs.to_matrix()?,
            rank: self.meta.r,
            tau: self.meta.tau,
            resamples: self.meta.resamples,
        };
        let ensemble = MeasurementEnsemble {
            y: self.y.to_matrix()?,
            clean: self.clean.to_matrix()?,
            snr_db: self.meta.snr_db.unwrap_or(f64::INFINITY),
            noise_seed: self.meta.noise_seed,
        };
        Ok(Instance {
            sensing,
            truth,
            ensemble,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dump serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Dump(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}
