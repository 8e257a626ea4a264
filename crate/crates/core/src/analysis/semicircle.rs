//! Semicircle-law integrals behind `F(alpha)` and the feasibility gap.

use serde::{Deserialize, Serialize};

use crate::quadrature::integrate;
use crate::{Error, Result};

const QUAD_TOL: f64 = 1e-12;
const BISECTION_TOL: f64 = 1e-12;

/// `int_0^y (1/pi) sqrt(4 - x^2) dx` for `y` in `[0, 2]`.
pub fn semicircle_cdf(y: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&y) {
        return Err(Error::param(format!(
            "semicircle argument {y} outside [0, 2]"
        )));
    }
    Ok(integrate(
        |x| (4.0 - x * x).max(0.0).sqrt() / std::f64::consts::PI,
        0.0,
        y,
        QUAD_TOL,
    ))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::param(format!("alpha {alpha} outside (0, 1]")));
    }
    Ok(())
}

/// The `t` in `[0, 1]` with `semicircle_cdf(2 t) = alpha`, by bisection.
pub fn semicircle_t1(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if semicircle_cdf(2.0 * mid)? < alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Density of the squared-semicircle law times `x`: `sqrt((4 - x) x) / (2 pi)`.
fn weighted_density(x: f64) -> f64 {
    ((4.0 - x) * x).max(0.0).sqrt() / (2.0 * std::f64::consts::PI)
}

/// `F(alpha) = (1/alpha) int_0^{4 t1^2} x dlambda_1(x)`.
pub fn f_alpha(alpha: f64) -> Result<f64> {
    let t = semicircle_t1(alpha)?;
    Ok(integrate(weighted_density, 0.0, 4.0 * t * t, QUAD_TOL) / alpha)
}

/// Total mass of `dlambda_1` on `[0, 4]`; one for a probability measure.
pub fn lambda1_total_mass() -> f64 {
    integrate(|x| weighted_density(x) / x, 0.0, 4.0, 1e-10)
}

/// `f(gamma, alpha) = (alpha - alpha sqrt(gamma) (2 - F(alpha))) / 2 -
/// (1 - gamma (1 + alpha))`.
pub fn feasibility_gap(gamma: f64, alpha: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::param(format!("gamma {gamma} outside (0, 1)")));
    }
    let f = f_alpha(alpha)?;
    Ok(gap_with(gamma, alpha, f))
}

pub(crate) fn gap_with(gamma: f64, alpha: f64, f: f64) -> f64 {
    (alpha - alpha * gamma.sqrt() * (2.0 - f)) / 2.0 - (1.0 - gamma * (1.0 + alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// `f < 0` and `m > r + k`: filtering tolerates more perturbation.
    FilteringFavored,
    /// `m > r + k` but `f >= 0`.
    SompFavored,
    /// `m <= r + k`: the backward condition is vacuous.
    Infeasible,
}

impl Region {
    pub fn name(self) -> &'static str {
        match self {
            Region::FilteringFavored => "filtering_favored",
            Region::SompFavored => "somp_favored",
            Region::Infeasible => "infeasible",
        }
    }

    pub(crate) fn classify(gamma: f64, alpha: f64, gap: f64) -> Region {
        // m > r + k  <=>  gamma (1 + alpha) < 1
        if gamma * (1.0 + alpha) >= 1.0 {
            Region::Infeasible
        } else if gap < 0.0 {
            Region::FilteringFavored
        } else {
            Region::SompFavored
        }
    }
}

/// Classifies `(gamma, alpha)` by the sign of the gap and `m > r + k`.
pub fn filtering_region(gamma: f64, alpha: f64) -> Result<Region> {
    let gap = feasibility_gap(gamma, alpha)?;
    Ok(Region::classify(gamma, alpha, gap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // Independent oracle: closed forms of both integrals.
    fn cdf_closed(y: f64) -> f64 {
        ((y / 2.0) * (4.0 - y * y).sqrt() + 2.0 * (y / 2.0).asin()) / PI
    }

    fn f_closed(alpha: f64, t: f64) -> f64 {
        let phi = (1.0 - 2.0 * t * t).acos();
        (2.0 * phi - (2.0 * phi).sin()) / (2.0 * PI * alpha)
    }

    // Second scheme: composite Simpson after x = 2 - 2 cos(phi), which makes
    // the integrand smooth (2/pi) sin^2(phi).
    fn f_simpson(alpha: f64, t: f64) -> f64 {
        let top = (1.0 - 2.0 * t * t).acos();
        let n = 20_000;
        let h = top / n as f64;
        let g = |p: f64| 2.0 / PI * p.sin().powi(2);
        let mut s = g(0.0) + g(top);
        for i in 1..n {
            s += g(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0 / alpha
    }

    const F_HALF: f64 = 0.212_538_412_243_891_96;
    const T1_HALF: f64 = 0.403_972_753_299_517_21;

    #[test]
    fn cdf_matches_closed_form() {
        for i in 0..=40 {
            let y = i as f64 / 20.0;
            assert!(
                (semicircle_cdf(y).unwrap() - cdf_closed(y)).abs() < 1e-11,
                "{y}"
            );
        }
        assert!((semicircle_cdf(2.0).unwrap() - 1.0).abs() < 1e-11);
        assert!(semicircle_cdf(2.1).is_err());
    }

    #[test]
    fn t1_is_self_consistent() {
        for i in 1..=100 {
            let alpha = i as f64 / 100.0;
            let t = semicircle_t1(alpha).unwrap();
            assert!(
                (semicircle_cdf(2.0 * t).unwrap() - alpha).abs() < 1e-10,
                "{alpha}"
            );
        }
        assert!((semicircle_t1(0.5).unwrap() - T1_HALF).abs() < 1e-11);
    }

    #[test]
    fn f_half_golden_value_agrees_with_two_schemes() {
        let t = T1_HALF;
        assert!((f_closed(0.5, t) - F_HALF).abs() < 1e-12);
        assert!((f_simpson(0.5, t) - F_HALF).abs() < 1e-10);
        assert!((f_alpha(0.5).unwrap() - F_HALF).abs() < 1e-10);
        assert!((f_alpha(0.25).unwrap() - 0.051_808_788_066_654_178).abs() < 1e-10);
    }

    #[test]
    fn f_endpoints_and_monotonicity() {
        assert!((f_alpha(1.0).unwrap() - 1.0).abs() < 1e-8);
        assert!(f_alpha(1e-6).unwrap() < 1e-3);
        let vals: Vec<f64> = (1..=100)
            .map(|i| f_alpha(i as f64 / 100.0).unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[0] < w[1]));
        assert!(f_alpha(0.0).is_err());
        assert!(f_alpha(1.5).is_err());
    }

    #[test]
    fn lambda1_is_a_probability_measure() {
        assert!((lambda1_total_mass() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn gap_spot_values() {
        assert!((feasibility_gap(0.25, 1.0).unwrap() + 0.25).abs() < 1e-10);
        assert_eq!(
            filtering_region(0.25, 1.0).unwrap(),
            Region::FilteringFavored
        );
        // gamma -> 0 leaves alpha / 2 - 1
        for alpha in [0.1, 0.5, 1.0] {
            let g = feasibility_gap(1e-12, alpha).unwrap();
            assert!((g - (alpha / 2.0 - 1.0)).abs() < 1e-5);
        }
        assert_eq!(filtering_region(0.6, 1.0).unwrap(), Region::Infeasible);
        assert!(feasibility_gap(1.0, 0.5).is_err());
    }
}
