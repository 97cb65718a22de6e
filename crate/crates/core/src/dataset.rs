use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{feature_names, FeatureVector};

/// Binary class tag. Seizure recordings are the negative class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassLabel {
    Positive,
    Negative,
}

impl ClassLabel {
    pub fn sign(self) -> f64 {
        match self {
            ClassLabel::Positive => 1.0,
            ClassLabel::Negative => -1.0,
        }
    }

    pub fn from_sign(value: f64) -> Self {
        if value >= 0.0 {
            ClassLabel::Positive
        } else {
            ClassLabel::Negative
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::Positive => "positive",
            ClassLabel::Negative => "negative",
        }
    }
}

/// Feature matrix with one class label and source id per row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub feature_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<ClassLabel>,
    pub ids: Vec<String>,
}

impl LabeledDataset {
    pub fn new(
        feature_names: Vec<String>,
        rows: Vec<Vec<f64>>,
        labels: Vec<ClassLabel>,
        ids: Vec<String>,
    ) -> Result<Self> {
        if rows.len() != labels.len() || rows.len() != ids.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                found: labels.len().min(ids.len()),
            });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != feature_names.len()) {
            return Err(Error::DimensionMismatch {
                expected: feature_names.len(),
                found: bad.len(),
            });
        }
        Ok(Self {
            feature_names,
            rows,
            labels,
            ids,
        })
    }

    pub fn from_features(vectors: &[FeatureVector], labels: Vec<ClassLabel>) -> Result<Self> {
        Self::new(
            feature_names(),
            vectors.iter().map(|v| v.values.to_vec()).collect(),
            labels,
            vectors.iter().map(|v| v.signal_id.clone()).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.feature_names.len()
    }

    pub fn count(&self, label: ClassLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Keeps the given 0-based columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Self {
        Self {
            feature_names: columns.iter().map(|&c| self.feature_names[c].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| columns.iter().map(|&c| r[c]).collect())
                .collect(),
            labels: self.labels.clone(),
            ids: self.ids.clone(),
        }
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[c]).collect()
    }
}
