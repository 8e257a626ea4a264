//! Tabulated curves: `sigma_k` along a growing correct support, and the
//! `(gamma, alpha)` feasibility grid.

use std::io::Write;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::semicircle::{f_alpha, gap_with, Region};
use super::sigma_k_augmented;
use crate::bench::csv::sig6;
use crate::problem::{gen_gaussian_sensing, gen_ground_truth, synthesize};
use crate::seed::{mix, rng_from_seed, STREAM_MATRIX, STREAM_NOISE, STREAM_TRUTH};
use crate::subspace::principal_subspace;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaKProfileConfig {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub m: usize,
    pub snapshots: usize,
    pub instances: usize,
    pub seed: u64,
}

impl Default for SigmaKProfileConfig {
    fn default() -> Self {
        SigmaKProfileConfig {
            n: 128,
            k: 8,
            r: 6,
            m: 24,
            snapshots: 16,
            instances: 100,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaKRow {
    pub l: usize,
    pub mean: f64,
    pub std: f64,
}

/// `sigma_k([A_I  S])` for `|I| = k - r + l`, `l = 0..r`, with `I` a growing
/// prefix of a random ordering of the true support and `S` the noiseless
/// signal subspace. Returns the mean and sample standard deviation over the
/// instances.
pub fn sigma_k_profile(cfg: &SigmaKProfileConfig) -> Result<Vec<SigmaKRow>> {
    let SigmaKProfileConfig {
        n,
        k,
        r,
        m,
        snapshots,
        instances,
        seed,
    } = *cfg;
    if r == 0 || r > k || k > n || r > snapshots || instances == 0 || m == 0 {
        return Err(Error::param(format!(
            "invalid profile config n={n} k={k} r={r} m={m} N={snapshots} instances={instances}"
        )));
    }
    let per_instance: Vec<Vec<f64>> = (0..instances as u64)
        .into_par_iter()
        .map(|i| {
            let s0 = mix(seed, i);
            let a = gen_gaussian_sensing(m, n, 0.0, mix(s0, STREAM_MATRIX))?;
            let gt = gen_ground_truth::<f64>(n, k, r, snapshots, 1.0, mix(s0, STREAM_TRUTH))?;
            let ens = synthesize(&a, &gt, f64::INFINITY, 0)?;
            let s = principal_subspace(&ens.clean, r)?;
            let mut order = gt.support.clone();
            order.shuffle(&mut rng_from_seed(mix(s0, STREAM_NOISE)));
            (0..r)
                .map(|l| sigma_k_augmented(a.matrix(), &order[..k - r + l], &s, k))
                .collect()
        })
        .collect::<Result<_>>()?;

    Ok((0..r)
        .map(|l| {
            let vals: Vec<f64> = per_instance.iter().map(|v| v[l]).collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let var = if vals.len() > 1 {
                vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (vals.len() - 1) as f64
            } else {
                0.0
            };
            SigmaKRow {
                l,
                mean,
                std: var.sqrt(),
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityRow {
    pub gamma: f64,
    pub alpha: f64,
    pub f_alpha: f64,
    pub f: f64,
    pub region: Region,
}

/// Evaluates the feasibility gap on `gamma` in `(0, 1)`, `alpha` in `(0, 1]`
/// at multiples of `step`. Rows are ordered by `alpha`, then `gamma`.
pub fn feasibility_grid(step: f64) -> Result<Vec<FeasibilityRow>> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(Error::param(format!("grid step {step} outside (0, 0.5]")));
    }
    let count = (1.0 / step).round() as usize;
    let gammas: Vec<f64> = (1..count)
        .map(|i| i as f64 * step)
        .filter(|&g| g < 1.0)
        .collect();
    let rows: Vec<Vec<FeasibilityRow>> = (1..=count)
        .into_par_iter()
        .map(|j| {
            let alpha = (j as f64 * step).min(1.0);
            let fa = f_alpha(alpha)?;
            Ok(gammas
                .iter()
                .map(|&gamma| {
                    let f = gap_with(gamma, alpha, fa);
                    FeasibilityRow {
                        gamma,
                        alpha,
                        f_alpha: fa,
                        f,
                        region: Region::classify(gamma, alpha, f),
                    }
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

pub fn write_sigma_k_csv<W: Write>(rows: &[SigmaKRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "l,sigma_k_mean,sigma_k_std")?;
    for row in rows {
        writeln!(out, "{},{},{}", row.l, sig6(row.mean), sig6(row.std))?;
    }
    out.flush()
}

pub fn write_feasibility_csv<W: Write>(rows: &[FeasibilityRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "gamma,alpha,F_alpha,f,region")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            sig6(row.gamma),
            sig6(row.alpha),
            sig6(row.f_alpha),
            sig6(row.f),
            row.region.name()
        )?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_k_profile_is_non_decreasing() {
        let rows = sigma_k_profile(&SigmaKProfileConfig::default()).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.windows(2).all(|w| w[0].mean <= w[1].mean), "{rows:?}");
        assert!(rows.iter().all(|r| r.mean > 0.0 && r.std >= 0.0));
    }

    #[test]
    fn sigma_k_profile_is_deterministic() {
        let cfg = SigmaKProfileConfig {
            instances: 8,
            ..Default::default()
        };
        assert_eq!(
            sigma_k_profile(&cfg).unwrap(),
            sigma_k_profile(&cfg).unwrap()
        );
    }

    #[test]
    fn grid_shape_and_sign_changes() {
        let rows = feasibility_grid(0.01).unwrap();
        assert_eq!(rows.len(), 99 * 100);
        for chunk in rows.chunks(99) {
            let alpha = chunk[0].alpha;
            assert!(chunk.iter().all(|r| r.alpha == alpha));
            let flips = chunk
                .windows(2)
                .filter(|w| (w[0].f < 0.0) != (w[1].f < 0.0))
                .count();
            assert!(flips <= 2, "alpha {alpha}: {flips} sign changes");
        }
        let spot = rows
            .iter()
            .find(|r| (r.gamma - 0.25).abs() < 1e-12 && r.alpha == 1.0)
            .unwrap();
        assert!((spot.f + 0.25).abs() < 1e-10);
        assert_eq!(spot.region, Region::FilteringFavored);
    }

    #[test]
    fn csv_headers() {
        let mut buf = Vec::new();
        write_feasibility_csv(&feasibility_grid(0.5).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("gamma,alpha,F_alpha,f,region\n"));
        assert_eq!(text.lines().count(), 1 + 2);
    }
}
