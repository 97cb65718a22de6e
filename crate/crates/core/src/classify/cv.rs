use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::metrics::{compute_metrics, ConfusionMatrix, Metrics};
use super::{Classifier, Trainer};
use crate::dataset::{ClassLabel, LabeledDataset};
use crate::error::{Error, Result};

/// Fold index for every sample. Each class is shuffled with the seed and
/// dealt round-robin, so per-class fold sizes differ by at most one.
pub fn stratified_folds(labels: &[ClassLabel], k_folds: usize, seed: u64) -> Result<Vec<usize>> {
    if k_folds < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 folds, got {k_folds}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![0; labels.len()];
    for class in [ClassLabel::Positive, ClassLabel::Negative] {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if members.len() < k_folds {
            return Err(Error::ClassTooSmall {
                class: class.as_str(),
                count: members.len(),
                folds: k_folds,
            });
        }
        members.shuffle(&mut rng);
        for (p, i) in members.into_iter().enumerate() {
            folds[i] = p % k_folds;
        }
    }
    Ok(folds)
}

/// Unweighted averages of the per-fold metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoldMeans {
    pub accuracy: Option<f64>,
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvOutcome {
    pub fold_confusions: Vec<ConfusionMatrix>,
    /// Sum of the fold confusions.
    pub confusion: ConfusionMatrix,
    /// Metrics of the summed confusion.
    pub metrics: Metrics,
    pub fold_means: FoldMeans,
}

impl CvOutcome {
    pub fn from_folds(fold_confusions: Vec<ConfusionMatrix>) -> Self {
        let mut confusion = ConfusionMatrix::default();
        fold_confusions.iter().for_each(|c| confusion += *c);
        let per_fold: Vec<Metrics> = fold_confusions.iter().map(compute_metrics).collect();
        let mean = |get: fn(&Metrics) -> Option<f64>| {
            let v: Vec<f64> = per_fold.iter().filter_map(get).collect();
            (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
        };
        let fold_means = FoldMeans {
            accuracy: mean(|m| m.accuracy),
            sensitivity: mean(|m| m.sensitivity),
            specificity: mean(|m| m.specificity),
        };
        Self {
            metrics: compute_metrics(&confusion),
            fold_confusions,
            confusion,
            fold_means,
        }
    }
}

pub(crate) fn split_fold<'a>(
    rows: &'a [Vec<f64>],
    labels: &[ClassLabel],
    folds: &[usize],
    fold: usize,
) -> (Vec<Vec<f64>>, Vec<ClassLabel>, Vec<&'a Vec<f64>>, Vec<ClassLabel>) {
    let mut train_rows = Vec::new();
    let mut train_labels = Vec::new();
    let mut test_rows = Vec::new();
    let mut test_labels = Vec::new();
    for i in 0..rows.len() {
        if folds[i] == fold {
            test_rows.push(&rows[i]);
            test_labels.push(labels[i]);
        } else {
            train_rows.push(rows[i].clone());
            train_labels.push(labels[i]);
        }
    }
    (train_rows, train_labels, test_rows, test_labels)
}

/// Stratified k-fold cross-validation. Each model is trained (and fits its
/// own feature scaling) on the training folds only.
pub fn k_fold_cv<T: Trainer>(
    data: &LabeledDataset,
    k_folds: usize,
    trainer: &T,
    seed: u64,
) -> Result<CvOutcome> {
    let folds = stratified_folds(&data.labels, k_folds, seed)?;
    let mut confusions = Vec::with_capacity(k_folds);
    for fold in 0..k_folds {
        let (train_rows, train_labels, test_rows, test_labels) =
            split_fold(&data.rows, &data.labels, &folds, fold);
        let model = trainer.train(&train_rows, &train_labels)?;
        let mut cm = ConfusionMatrix::default();
        for (x, truth) in test_rows.into_iter().zip(test_labels) {
            cm.record(truth, model.predict(x)?);
        }
        confusions.push(cm);
    }
    Ok(CvOutcome::from_folds(confusions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ClassLabel::{Negative, Positive};

    struct Oracle;
    struct Constant(ClassLabel);

    impl Trainer for Oracle {
        type Model = Oracle;
        fn train(&self, _: &[Vec<f64>], _: &[ClassLabel]) -> Result<Oracle> {
            Ok(Oracle)
        }
    }

    impl Classifier for Oracle {
        // the single feature is the label's sign
        fn predict(&self, x: &[f64]) -> Result<ClassLabel> {
            Ok(ClassLabel::from_sign(x[0]))
        }
    }

    impl Trainer for Constant {
        type Model = Constant;
        fn train(&self, _: &[Vec<f64>], _: &[ClassLabel]) -> Result<Constant> {
            Ok(Constant(self.0))
        }
    }

    impl Classifier for Constant {
        fn predict(&self, _: &[f64]) -> Result<ClassLabel> {
            Ok(self.0)
        }
    }

    fn balanced(n_pos: usize, n_neg: usize) -> LabeledDataset {
        let labels: Vec<ClassLabel> = (0..n_pos + n_neg)
            .map(|i| if i < n_pos { Positive } else { Negative })
            .collect();
        LabeledDataset::new(
            vec!["s".into()],
            labels.iter().map(|l| vec![l.sign()]).collect(),
            labels,
            (0..n_pos + n_neg).map(|i| i.to_string()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn perfect_classifier() {
        for k in [2, 5, 10] {
            let r = k_fold_cv(&balanced(37, 23), k, &Oracle, 1).unwrap();
            assert_eq!(r.metrics.accuracy, Some(100.0));
            assert_eq!(r.confusion.total(), 60);
        }
    }

    #[test]
    fn constant_prediction() {
        let r = k_fold_cv(&balanced(50, 50), 10, &Constant(Positive), 1).unwrap();
        assert_eq!(r.metrics.accuracy, Some(50.0));
        assert_eq!(r.metrics.specificity, Some(0.0));
        assert_eq!(r.metrics.sensitivity, Some(100.0));
    }

    #[test]
    fn fold_sizes_balanced_per_class() {
        let labels = balanced(47, 13).labels;
        let folds = stratified_folds(&labels, 10, 7).unwrap();
        for class in [Positive, Negative] {
            let mut counts = vec![0; 10];
            for (f, l) in folds.iter().zip(&labels) {
                if *l == class {
                    counts[*f] += 1;
                }
            }
            let (lo, hi) = (counts.iter().min().unwrap(), counts.iter().max().unwrap());
            assert!(hi - lo <= 1, "{counts:?}");
        }
    }

    #[test]
    fn folds_are_seeded() {
        let labels = balanced(30, 30).labels;
        assert_eq!(
            stratified_folds(&labels, 5, 3).unwrap(),
            stratified_folds(&labels, 5, 3).unwrap()
        );
        assert_ne!(
            stratified_folds(&labels, 5, 3).unwrap(),
            stratified_folds(&labels, 5, 4).unwrap()
        );
    }

    #[test]
    fn small_class() {
        assert!(matches!(
            stratified_folds(&balanced(20, 9).labels, 10, 1),
            Err(Error::ClassTooSmall { count: 9, .. })
        ));
        assert!(stratified_folds(&balanced(20, 20).labels, 1, 1).is_err());
    }
}
