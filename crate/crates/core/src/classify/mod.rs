//! Binary classifiers, cross-validation and hyperparameter search.

mod cv;
mod grid;
mod knn;
mod metrics;
mod svm;

pub use cv::{k_fold_cv, stratified_folds, CvOutcome, FoldMeans};
pub use grid::{
    default_c_grid, default_gamma_grid, default_k_grid, grid_search, knn_grid_search, GridCell,
    GridSearchResult, KnnCell, KnnSearchResult,
};
pub use knn::{train_knn, KnnModel, KnnTrainer};
pub use metrics::{compute_metrics, ConfusionMatrix, Metrics};
pub use svm::{rbf_kernel, train_svm, SvmModel, SvmParams, SvmTrainer};

use serde::{Deserialize, Serialize};

use crate::dataset::ClassLabel;
use crate::error::Result;

pub trait Classifier {
    fn predict(&self, x: &[f64]) -> Result<ClassLabel>;
}

pub trait Trainer {
    type Model: Classifier;

    fn train(&self, rows: &[Vec<f64>], labels: &[ClassLabel]) -> Result<Self::Model>;
}

/// Per-feature z-score parameters learned from training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    /// Population mean and standard deviation per column. Constant columns
    /// get unit scale so they map to zero.
    pub fn fit(rows: &[Vec<f64>]) -> Self {
        let dim = rows.first().map_or(0, Vec::len);
        let n = rows.len().max(1) as f64;
        let mut mean = vec![0.0; dim];
        for r in rows {
            mean.iter_mut().zip(r).for_each(|(m, x)| *m += x);
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; dim];
        for r in rows {
            var.iter_mut()
                .zip(r.iter().zip(&mean))
                .for_each(|(v, (x, m))| *v += (x - m) * (x - m));
        }
        let std = var
            .into_iter()
            .map(|v| {
                let s = (v / n).sqrt();
                if s > 0.0 && s.is_finite() {
                    s
                } else {
                    1.0
                }
            })
            .collect();
        Self { mean, std }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn transform(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(x, (m, s))| (x - m) / s)
            .collect()
    }
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Row-major `n × n` matrix of squared Euclidean distances.
pub(crate) fn squared_distance_matrix(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = squared_distance(&rows[i], &rows[j]);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    d
}
