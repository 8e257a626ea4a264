//! Parameter sets of the published experiments.

use super::config::{ExperimentConfig, Family};
use crate::analysis::SigmaKProfileConfig;
use crate::recovery::Algorithm;
use crate::{Error, Result};

pub const PRESET_NAMES: [&str; 8] = [
    "fig1", "fig2", "fig3", "fig4", "fig5", "fig6a", "fig6b", "fig7",
];

/// Grid step of the feasibility-region preset.
pub const FIG2_STEP: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisTarget {
    SigmaKProfile(SigmaKProfileConfig),
    FeasibilityGrid { step: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Preset {
    Sweep(ExperimentConfig),
    Analysis(AnalysisTarget),
}

impl Preset {
    pub fn into_sweep(self, name: &str) -> Result<ExperimentConfig> {
        match self {
            Preset::Sweep(cfg) => Ok(cfg),
            Preset::Analysis(_) => Err(Error::param(format!(
                "preset `{name}` is an analysis target; use the analyze command"
            ))),
        }
    }
}

pub fn preset(name: &str) -> Result<Preset> {
    use Algorithm::*;
    let base = ExperimentConfig::default();
    let cfg = match name {
        "fig1" => {
            return Ok(Preset::Analysis(AnalysisTarget::SigmaKProfile(
                SigmaKProfileConfig::default(),
            )))
        }
        "fig2" => {
            return Ok(Preset::Analysis(AnalysisTarget::FeasibilityGrid {
                step: FIG2_STEP,
            }))
        }
        "fig3" => ExperimentConfig {
            snapshots: vec![6, 16, 256],
            algorithms: vec![SeqCsMusic, CsMusic],
            ..base
        },
        "fig4" => ExperimentConfig {
            snapshots: vec![6, 16],
            algorithms: vec![SeqCsMusic, SeqNoFilter, CsMusic],
            ..base
        },
        "fig5" => ExperimentConfig {
            snapshots: vec![8, 256],
            algorithms: vec![SeqCsMusic, CsMusic, SOmp],
            ..base
        },
        "fig6a" => ExperimentConfig {
            snapshots: vec![64],
            taus: vec![1.0, 0.5],
            algorithms: vec![SeqCsMusic, CsMusic],
            ..base
        },
        "fig6b" => ExperimentConfig {
            snapshots: vec![64],
            means: vec![0.0, 1.0],
            algorithms: vec![SeqCsMusic, CsMusic],
            ..base
        },
        "fig7" => ExperimentConfig {
            family: Family::Fourier,
            snapshots: vec![5],
            algorithms: vec![SeqCsMusic, CsMusic, SOmp],
            ..base
        },
        _ => {
            return Err(Error::UnknownPreset {
                name: name.to_string(),
                valid: PRESET_NAMES.join(", "),
            })
        }
    };
    Ok(Preset::Sweep(cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sweep(name: &str) -> ExperimentConfig {
        preset(name).unwrap().into_sweep(name).unwrap()
    }

    #[test]
    fn every_preset_resolves_and_validates() {
        for name in PRESET_NAMES {
            if let Preset::Sweep(cfg) = preset(name).unwrap() {
                cfg.validate().unwrap();
                assert_eq!(cfg.trials, 1000);
                assert_eq!((cfg.n, cfg.k, cfg.r), (128, 8, 4));
                assert_eq!(cfg.snr_db, 30.0);
            }
        }
    }

    #[test]
    fn published_parameters() {
        let f3 = sweep("fig3");
        assert_eq!(f3.snapshots, vec![6, 16, 256]);
        assert_eq!(f3.m, (1..=30).collect::<Vec<_>>());
        assert_eq!(f3.algorithms.len() * f3.points().len(), 2 * 30 * 3);
        assert!(sweep("fig4").algorithms.contains(&Algorithm::SeqNoFilter));
        assert_eq!(sweep("fig6a").taus, vec![1.0, 0.5]);
        assert_eq!(sweep("fig6b").means, vec![0.0, 1.0]);
        let f7 = sweep("fig7");
        assert_eq!(f7.family, Family::Fourier);
        assert_eq!(f7.snapshots, vec![5]);
        match preset("fig1").unwrap() {
            Preset::Analysis(AnalysisTarget::SigmaKProfile(c)) => {
                assert_eq!((c.n, c.k, c.r), (128, 8, 6))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_preset_lists_valid_names() {
        let err = preset("fig9").unwrap_err();
        assert!(err.to_string().contains("fig6a"), "{err}");
        assert!(preset("fig2").unwrap().into_sweep("fig2").is_err());
    }
}
