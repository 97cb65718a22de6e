//! Multifractal detrended fluctuation analysis (MFDFA), singularity spectra,
//! and a feature/classifier pipeline for single-channel EEG seizure detection.

pub mod classify;
pub mod dataset;
pub mod error;
pub mod export;
pub mod features;
pub mod ingest;
pub mod mfdfa;
mod par;
pub mod pipeline;
pub mod series;
pub mod spectrum;
pub mod stats;
pub mod synth;

pub use dataset::{ClassLabel, LabeledDataset};
pub use error::{Error, Result};
pub use features::{extract_features, FeatureConvention, FeatureVector, FEATURE_COUNT};
pub use mfdfa::{analyze_samples, mfdfa, HurstCurve, MfdfaConfig, MfdfaResult};
pub use pipeline::{ClassifierKind, EvaluationReport, PipelineConfig};
pub use series::TimeSeries;
pub use spectrum::{singularity_spectrum, SingularitySpectrum, SpectrumDescriptors};
