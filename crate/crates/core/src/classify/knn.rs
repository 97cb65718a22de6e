use serde::{Deserialize, Serialize};

use super::svm::check_training_set;
use super::{squared_distance, Classifier, Standardizer, Trainer};
use crate::dataset::ClassLabel;
use crate::error::{Error, Result};

/// k-nearest-neighbour majority vote on z-scored features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub feature_scaler: Standardizer,
    rows: Vec<Vec<f64>>,
    labels: Vec<ClassLabel>,
}

pub fn train_knn(rows: &[Vec<f64>], labels: &[ClassLabel], k: usize) -> Result<KnnModel> {
    check_training_set(rows, labels)?;
    if rows.is_empty() {
        return Err(Error::InvalidParameter("empty training set".into()));
    }
    if k == 0 || k.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("k must be odd and positive, got {k}")));
    }
    if k > rows.len() {
        return Err(Error::KTooLarge { k, n: rows.len() });
    }
    let feature_scaler = Standardizer::fit(rows);
    Ok(KnnModel {
        k,
        rows: rows.iter().map(|r| feature_scaler.transform(r)).collect(),
        labels: labels.to_vec(),
        feature_scaler,
    })
}

impl Classifier for KnnModel {
    fn predict(&self, x: &[f64]) -> Result<ClassLabel> {
        if x.len() != self.feature_scaler.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.feature_scaler.dim(),
                found: x.len(),
            });
        }
        let z = self.feature_scaler.transform(x);
        let mut order: Vec<(f64, usize)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (squared_distance(r, &z), i))
            .collect();
        // distance ties go to the lower sample index
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let positives = order[..self.k]
            .iter()
            .filter(|(_, i)| self.labels[*i] == ClassLabel::Positive)
            .count();
        Ok(if 2 * positives > self.k {
            ClassLabel::Positive
        } else {
            ClassLabel::Negative
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnnTrainer(pub usize);

impl Trainer for KnnTrainer {
    type Model = KnnModel;

    fn train(&self, rows: &[Vec<f64>], labels: &[ClassLabel]) -> Result<KnnModel> {
        train_knn(rows, labels, self.0)
    }
}
