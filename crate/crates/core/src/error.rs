use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sample {index} is not finite")]
    NonFiniteSample { index: usize },

    #[error("series of length {len} is too short (need at least {required} samples)")]
    SeriesTooShort { len: usize, required: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("scale grid degenerates to {scales} distinct scales (need at least {required})")]
    DegenerateGrid { scales: usize, required: usize },

    #[error("scale {scale} leaves no complete segment in a profile of length {len}")]
    ScaleTooLarge { scale: usize, len: usize },

    #[error("segment of {points} points cannot determine a polynomial of order {order}")]
    FitUnderdetermined { points: usize, order: usize },

    #[error("every segment variance is zero; q = {q} is undefined")]
    AllZeroVariance { q: f64 },

    #[error("only {usable} usable scales for q = {q}; need at least {required}")]
    InsufficientScales {
        q: f64,
        usable: usize,
        required: usize,
    },

    #[error("q-grid of {points} points is too coarse for a derivative")]
    GridTooCoarse { points: usize },

    #[error("q = 2 is missing from the q-grid")]
    MissingQ2,

    #[error("circulant embedding has a negative eigenvalue ({min_eigenvalue:e})")]
    EmbeddingFailure { min_eigenvalue: f64 },

    #[error("need at least {required} samples per group, got {found}")]
    InsufficientSamples { required: usize, found: usize },

    #[error("labels contain a single class")]
    SingleClass,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("SMO did not converge after {iterations} iterations (KKT gap {gap:e})")]
    NonConvergence { iterations: usize, gap: f64 },

    #[error("k = {k} exceeds the training size {n}")]
    KTooLarge { k: usize, n: usize },

    #[error("class {class} has {count} samples, fewer than the {folds} folds")]
    ClassTooSmall {
        class: &'static str,
        count: usize,
        folds: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: line {line}: cannot parse {content:?} as a sample")]
    Parse {
        path: PathBuf,
        line: usize,
        content: String,
    },

    #[error("{0}: file contains no samples")]
    EmptyFile(PathBuf),

    #[error("set {0} is not loaded")]
    MissingSet(char),

    #[error("no signal files found under {0}")]
    NoSignals(PathBuf),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the input data.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::AllZeroVariance { .. }
                | Error::InsufficientScales { .. }
                | Error::GridTooCoarse { .. }
                | Error::EmbeddingFailure { .. }
                | Error::NonConvergence { .. }
                | Error::FitUnderdetermined { .. }
        )
    }
}
