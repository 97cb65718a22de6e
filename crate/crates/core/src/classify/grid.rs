use log::warn;
use serde::{Deserialize, Serialize};

use super::cv::{split_fold, stratified_folds, CvOutcome};
use super::knn::KnnTrainer;
use super::metrics::ConfusionMatrix;
use super::svm::{train_from_distances, SvmParams};
use super::{k_fold_cv, squared_distance_matrix, Classifier, Standardizer};
use crate::dataset::{ClassLabel, LabeledDataset};
use crate::error::{Error, Result};

/// `2^-5, 2^-3, …, 2^15`.
pub fn default_c_grid() -> Vec<f64> {
    (0..=10).map(|i| 2f64.powi(-5 + 2 * i)).collect()
}

/// `2^-15, 2^-13, …, 2^3`.
pub fn default_gamma_grid() -> Vec<f64> {
    (0..=9).map(|i| 2f64.powi(-15 + 2 * i)).collect()
}

pub fn default_k_grid() -> Vec<usize> {
    vec![1, 3, 5, 7, 9]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub c_penalty: f64,
    pub gamma: f64,
    pub correct: usize,
    pub total: usize,
    /// CV accuracy in percent; `None` when some fold failed to converge.
    pub accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub best_c: f64,
    pub best_gamma: f64,
    pub best: CvOutcome,
    pub cells: Vec<GridCell>,
    pub non_converged: usize,
}

struct FoldCache {
    scaled_train: Vec<Vec<f64>>,
    distances: Vec<f64>,
    train_labels: Vec<ClassLabel>,
    scaler: Standardizer,
    test_rows: Vec<Vec<f64>>,
    test_labels: Vec<ClassLabel>,
}

fn sorted_grid(grid: &[f64], name: &str) -> Result<Vec<f64>> {
    if grid.is_empty() || grid.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidParameter(format!("{name} grid must be non-empty and positive")));
    }
    let mut g = grid.to_vec();
    g.sort_by(f64::total_cmp);
    g.dedup();
    Ok(g)
}

/// Exhaustive (C, γ) search by stratified CV accuracy. The best cell has the
/// most correct predictions; ties go to the smaller C, then the smaller γ.
/// Cells where any fold hits the SMO iteration cap are skipped and counted.
pub fn grid_search(
    data: &LabeledDataset,
    c_grid: &[f64],
    gamma_grid: &[f64],
    k_folds: usize,
    seed: u64,
) -> Result<GridSearchResult> {
    let c_grid = sorted_grid(c_grid, "C")?;
    let gamma_grid = sorted_grid(gamma_grid, "gamma")?;
    let folds = stratified_folds(&data.labels, k_folds, seed)?;
    let caches: Vec<FoldCache> = (0..k_folds)
        .map(|fold| {
            let (train_rows, train_labels, test_rows, test_labels) =
                split_fold(&data.rows, &data.labels, &folds, fold);
            let scaler = Standardizer::fit(&train_rows);
            let scaled_train: Vec<Vec<f64>> = train_rows.iter().map(|r| scaler.transform(r)).collect();
            FoldCache {
                distances: squared_distance_matrix(&scaled_train),
                scaled_train,
                train_labels,
                scaler,
                test_rows: test_rows.into_iter().cloned().collect(),
                test_labels,
            }
        })
        .collect();

    let cells: Vec<(f64, f64)> = c_grid
        .iter()
        .flat_map(|&c| gamma_grid.iter().map(move |&g| (c, g)))
        .collect();
    let evaluated = crate::par::map(&cells, |&(c, gamma)| -> Result<Option<Vec<ConfusionMatrix>>> {
        let params = SvmParams::new(c, gamma);
        let mut confusions = Vec::with_capacity(caches.len());
        for cache in &caches {
            let model = match train_from_distances(
                cache.scaled_train.clone(),
                &cache.distances,
                &cache.train_labels,
                cache.scaler.clone(),
                &params,
            ) {
                Ok(m) => m,
                Err(Error::NonConvergence { iterations, gap }) => {
                    warn!("C = {c}, gamma = {gamma}: no convergence after {iterations} iterations (gap {gap:e})");
                    return Ok(None);
                }
                Err(e) => return Err(e),
            };
            let mut cm = ConfusionMatrix::default();
            for (x, truth) in cache.test_rows.iter().zip(&cache.test_labels) {
                cm.record(*truth, model.predict(x)?);
            }
            confusions.push(cm);
        }
        Ok(Some(confusions))
    });

    let mut out_cells = Vec::with_capacity(cells.len());
    let mut best: Option<(usize, f64, f64, Vec<ConfusionMatrix>)> = None;
    let mut non_converged = 0;
    for (&(c, gamma), result) in cells.iter().zip(evaluated) {
        match result? {
            Some(confusions) => {
                let correct: usize = confusions.iter().map(|m| m.correct()).sum();
                let total: usize = confusions.iter().map(|m| m.total()).sum();
                out_cells.push(GridCell {
                    c_penalty: c,
                    gamma,
                    correct,
                    total,
                    accuracy: Some(correct as f64 / total as f64 * 100.0),
                });
                if best.as_ref().is_none_or(|b| correct > b.0) {
                    best = Some((correct, c, gamma, confusions));
                }
            }
            None => {
                non_converged += 1;
                out_cells.push(GridCell {
                    c_penalty: c,
                    gamma,
                    correct: 0,
                    total: data.len(),
                    accuracy: None,
                });
            }
        }
    }
    let Some((_, best_c, best_gamma, confusions)) = best else {
        return Err(Error::NonConvergence {
            iterations: SvmParams::new(1.0, 1.0).max_iterations,
            gap: f64::NAN,
        });
    };
    Ok(GridSearchResult {
        best_c,
        best_gamma,
        best: CvOutcome::from_folds(confusions),
        cells: out_cells,
        non_converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnnCell {
    pub k: usize,
    pub correct: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnSearchResult {
    pub best_k: usize,
    pub best: CvOutcome,
    pub cells: Vec<KnnCell>,
}

/// CV search over neighbour counts; ties go to the smaller k.
pub fn knn_grid_search(
    data: &LabeledDataset,
    k_grid: &[usize],
    k_folds: usize,
    seed: u64,
) -> Result<KnnSearchResult> {
    let mut ks = k_grid.to_vec();
    ks.sort_unstable();
    ks.dedup();
    if ks.is_empty() {
        return Err(Error::InvalidParameter("k grid is empty".into()));
    }
    let outcomes = crate::par::map(&ks, |&k| k_fold_cv(data, k_folds, &KnnTrainer(k), seed));
    let mut cells = Vec::with_capacity(ks.len());
    let mut best: Option<(usize, usize, CvOutcome)> = None;
    for (&k, outcome) in ks.iter().zip(outcomes) {
        let outcome = outcome?;
        let correct = outcome.confusion.correct();
        cells.push(KnnCell {
            k,
            correct,
            accuracy: correct as f64 / outcome.confusion.total() as f64 * 100.0,
        });
        if best.as_ref().is_none_or(|b| correct > b.0) {
            best = Some((correct, k, outcome));
        }
    }
    let (_, best_k, best) = best.expect("non-empty grid");
    Ok(KnnSearchResult { best_k, best, cells })
}
