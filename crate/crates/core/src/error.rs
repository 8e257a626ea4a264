use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range for {len} columns")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("degenerate dictionary: every candidate residual is below tolerance")]
    DegenerateDictionary,

    #[error("ill-posed augmentation: [A_I U] has rank {rank}, expected {expected}")]
    IllPosedAugmentation { rank: usize, expected: usize },

    #[error("rank deficiency: {0}")]
    RankDeficient(String),

    #[error("infeasible regime: gamma * (1 + alpha) = {0} >= 1")]
    InfeasibleRegime(f64),

    #[error("degenerate draw persisted after {0} attempts")]
    ResampleExhausted(usize),

    #[error("unknown preset `{name}`; valid presets: {valid}")]
    UnknownPreset { name: String, valid: String },

    #[error("malformed instance dump: {0}")]
    Dump(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
