use serde::{Deserialize, Serialize};

use crate::dataset::ClassLabel;

/// Counts with the non-seizure class as positive.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionMatrix {
    pub fn record(&mut self, truth: ClassLabel, predicted: ClassLabel) {
        match (truth, predicted) {
            (ClassLabel::Positive, ClassLabel::Positive) => self.tp += 1,
            (ClassLabel::Positive, ClassLabel::Negative) => self.fn_ += 1,
            (ClassLabel::Negative, ClassLabel::Negative) => self.tn += 1,
            (ClassLabel::Negative, ClassLabel::Positive) => self.fp += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }

    pub fn correct(&self) -> usize {
        self.tp + self.tn
    }

    pub fn positives(&self) -> usize {
        self.tp + self.fn_
    }

    pub fn negatives(&self) -> usize {
        self.tn + self.fp
    }
}

impl std::ops::AddAssign for ConfusionMatrix {
    fn add_assign(&mut self, rhs: Self) {
        self.tp += rhs.tp;
        self.tn += rhs.tn;
        self.fp += rhs.fp;
        self.fn_ += rhs.fn_;
    }
}

/// Percentages; a metric whose denominator is zero is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: Option<f64>,
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
}

fn percent(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64 * 100.0)
}

pub fn compute_metrics(cm: &ConfusionMatrix) -> Metrics {
    Metrics {
        accuracy: percent(cm.correct(), cm.total()),
        sensitivity: percent(cm.tp, cm.positives()),
        specificity: percent(cm.tn, cm.negatives()),
    }
}
