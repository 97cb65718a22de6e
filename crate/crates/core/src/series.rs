use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single-channel signal with its sampling metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub id: String,
    pub samples: Vec<f64>,
    /// Hz.
    pub sample_rate: f64,
    pub label: Option<String>,
}

impl TimeSeries {
    /// Builds a series, rejecting NaN and infinite samples.
    pub fn new(id: impl Into<String>, samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        check_finite(&samples)?;
        Ok(Self {
            id: id.into(),
            samples,
            sample_rate,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Returns a copy with every sample multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            samples: self.samples.iter().map(|x| x * factor).collect(),
            ..self.clone()
        }
    }
}

pub(crate) fn check_finite(samples: &[f64]) -> Result<()> {
    match samples.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(Error::NonFiniteSample { index }),
        None => Ok(()),
    }
}
