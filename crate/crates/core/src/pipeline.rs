//! End-to-end run: per-signal MFDFA features, t-test ranking, forward
//! selection scored by cross-validated accuracy, and a final report.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use log::info;
use serde::{Deserialize, Serialize};

use crate::classify::{
    default_c_grid, default_gamma_grid, default_k_grid, grid_search, knn_grid_search, ConfusionMatrix,
    CvOutcome, FoldMeans, Metrics,
};
use crate::dataset::{ClassLabel, LabeledDataset};
use crate::error::{Error, Result};
use crate::export::CurveData;
use crate::features::{extract_features, FeatureConvention, FeatureVector};
use crate::ingest::{BonnSet, BonnSetId, ProblemId};
use crate::mfdfa::{mfdfa, q_grid, MfdfaConfig, MfdfaResult};
use crate::series::TimeSeries;
use crate::stats::{rank_features, sequential_forward_select, RankedFeature, SelectionResult};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    #[default]
    Svm,
    Knn,
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Svm => "svm",
            Self::Knn => "knn",
        })
    }
}

impl std::str::FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "svm" => Ok(Self::Svm),
            "knn" => Ok(Self::Knn),
            other => Err(Error::InvalidParameter(format!("unknown classifier {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub dataset_root: Option<PathBuf>,
    pub q_min: f64,
    pub q_max: f64,
    pub q_step: f64,
    pub scale_min: usize,
    pub scale_max: usize,
    pub scale_intervals: usize,
    pub detrend_order: usize,
    pub min_fit_scales: usize,
    pub cv_folds: usize,
    pub seed: u64,
    pub feature_convention: FeatureConvention,
    pub classifier: ClassifierKind,
    pub output_dir: PathBuf,
    pub c_grid: Vec<f64>,
    pub gamma_grid: Vec<f64>,
    pub k_grid: Vec<usize>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let m = MfdfaConfig::default();
        Self {
            dataset_root: None,
            q_min: -5.0,
            q_max: 5.0,
            q_step: 0.1,
            scale_min: m.scale_min,
            scale_max: m.scale_max,
            scale_intervals: m.scale_intervals,
            detrend_order: m.detrend_order,
            min_fit_scales: m.min_fit_scales,
            cv_folds: 10,
            seed: 42,
            feature_convention: FeatureConvention::default(),
            classifier: ClassifierKind::default(),
            output_dir: PathBuf::from("out"),
            c_grid: default_c_grid(),
            gamma_grid: default_gamma_grid(),
            k_grid: default_k_grid(),
        }
    }
}

impl PipelineConfig {
    pub fn mfdfa_config(&self) -> Result<MfdfaConfig> {
        if !(self.q_step > 0.0 && self.q_step.is_finite()) {
            return Err(Error::InvalidConfig(format!("q step must be positive, got {}", self.q_step)));
        }
        if !(self.q_min.is_finite() && self.q_max.is_finite() && self.q_min < self.q_max) {
            return Err(Error::InvalidConfig(format!(
                "q range [{}, {}] is empty",
                self.q_min, self.q_max
            )));
        }
        let config = MfdfaConfig {
            q_values: q_grid(self.q_min, self.q_max, self.q_step),
            scale_min: self.scale_min,
            scale_max: self.scale_max,
            scale_intervals: self.scale_intervals,
            detrend_order: self.detrend_order,
            min_fit_scales: self.min_fit_scales,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.mfdfa_config()?;
        if self.cv_folds < 2 {
            return Err(Error::InvalidConfig(format!("need at least 2 folds, got {}", self.cv_folds)));
        }
        match self.classifier {
            ClassifierKind::Svm if self.c_grid.is_empty() || self.gamma_grid.is_empty() => {
                Err(Error::InvalidConfig("SVM grids must be non-empty".into()))
            }
            ClassifierKind::Knn if self.k_grid.is_empty() => {
                Err(Error::InvalidConfig("k grid must be non-empty".into()))
            }
            _ => Ok(()),
        }
    }
}

/// MFDFA of every signal, in order.
pub fn analyze_signals(signals: &[TimeSeries], config: &MfdfaConfig) -> Result<Vec<MfdfaResult>> {
    crate::par::map(signals, |s| mfdfa(s, config)).into_iter().collect()
}

pub fn analyze_set(set: &BonnSet, config: &MfdfaConfig) -> Result<Vec<MfdfaResult>> {
    analyze_signals(&set.signals, config)
}

/// Features and curve summaries of every loaded set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetAnalysis {
    pub features: BTreeMap<BonnSetId, Vec<FeatureVector>>,
    /// Pointwise mean curves per set.
    pub mean_curves: BTreeMap<BonnSetId, CurveData>,
    /// Mean spectrum width Δα per set.
    pub mean_width: BTreeMap<BonnSetId, f64>,
}

pub fn analyze_dataset(sets: &BTreeMap<BonnSetId, BonnSet>, config: &PipelineConfig) -> Result<DatasetAnalysis> {
    let mfdfa_config = config.mfdfa_config()?;
    let mut out = DatasetAnalysis {
        features: BTreeMap::new(),
        mean_curves: BTreeMap::new(),
        mean_width: BTreeMap::new(),
    };
    for (&id, set) in sets {
        info!("analyzing set {id} ({} signals)", set.signals.len());
        let results = analyze_set(set, &mfdfa_config)?;
        let features = results
            .iter()
            .map(|r| extract_features(r, config.feature_convention))
            .collect::<Result<Vec<_>>>()?;
        let curves: Vec<CurveData> = results.iter().map(CurveData::from_result).collect();
        let width = curves.iter().map(CurveData::width).sum::<f64>() / curves.len() as f64;
        out.mean_curves.insert(id, CurveData::mean(format!("mean_{id}"), &curves)?);
        out.mean_width.insert(id, width);
        out.features.insert(id, features);
    }
    Ok(out)
}

/// Feature matrix of one problem, positive sets first.
pub fn problem_dataset(id: ProblemId, features: &BTreeMap<BonnSetId, Vec<FeatureVector>>) -> Result<LabeledDataset> {
    let problem = id.problem();
    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    for set in problem.sets() {
        let fv = features.get(&set).ok_or(Error::MissingSet(set.letter()))?;
        let label = problem.label_of(set).expect("set belongs to problem");
        vectors.extend(fv.iter().cloned());
        labels.extend(std::iter::repeat_n(label, fv.len()));
    }
    LabeledDataset::from_features(&vectors, labels)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    pub c_penalty: Option<f64>,
    pub gamma: Option<f64>,
    pub k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub problem_id: ProblemId,
    pub description: String,
    pub positive_sets: Vec<BonnSetId>,
    pub negative_sets: Vec<BonnSetId>,
    pub n_positive: usize,
    pub n_negative: usize,
    pub classifier: ClassifierKind,
    pub hyperparameters: Hyperparameters,
    /// 1-based feature numbers in selection order.
    pub selected_features: Vec<usize>,
    pub selection_trace: Vec<f64>,
    pub cv_folds: usize,
    pub seed: u64,
    pub fold_confusions: Vec<ConfusionMatrix>,
    pub confusion: ConfusionMatrix,
    /// Metrics of the summed confusion matrix.
    pub metrics: Metrics,
    pub fold_means: FoldMeans,
    /// SVM grid cells dropped because SMO hit its iteration cap.
    pub non_converged_cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemOutcome {
    pub ranking: Vec<RankedFeature>,
    pub selection: SelectionResult,
    pub report: EvaluationReport,
}

/// Best cross-validated model over the configured hyperparameter grid.
pub fn evaluate(data: &LabeledDataset, config: &PipelineConfig) -> Result<(Hyperparameters, CvOutcome, usize)> {
    match config.classifier {
        ClassifierKind::Svm => {
            let r = grid_search(data, &config.c_grid, &config.gamma_grid, config.cv_folds, config.seed)?;
            let hp = Hyperparameters {
                c_penalty: Some(r.best_c),
                gamma: Some(r.best_gamma),
                k: None,
            };
            Ok((hp, r.best, r.non_converged))
        }
        ClassifierKind::Knn => {
            let r = knn_grid_search(data, &config.k_grid, config.cv_folds, config.seed)?;
            let hp = Hyperparameters {
                k: Some(r.best_k),
                ..Hyperparameters::default()
            };
            Ok((hp, r.best, 0))
        }
    }
}

/// Rank, select and evaluate one classification problem.
pub fn run_problem(
    id: ProblemId,
    features: &BTreeMap<BonnSetId, Vec<FeatureVector>>,
    config: &PipelineConfig,
) -> Result<ProblemOutcome> {
    config.validate()?;
    let data = problem_dataset(id, features)?;
    let ranking = rank_features(&data)?;
    let selection = sequential_forward_select(&ranking, |cols| {
        let (_, outcome, _) = evaluate(&data.select_columns(cols), config)?;
        Ok(outcome.metrics.accuracy.unwrap_or(0.0))
    })?;
    let columns: Vec<usize> = selection.selected_indices.iter().map(|f| f - 1).collect();
    let (hyperparameters, outcome, non_converged_cells) = evaluate(&data.select_columns(&columns), config)?;
    info!(
        "problem {id}: features {:?}, accuracy {:?}",
        selection.selected_indices, outcome.metrics.accuracy
    );
    let problem = id.problem();
    let report = EvaluationReport {
        problem_id: id,
        description: problem.description.clone(),
        positive_sets: problem.positive_sets.clone(),
        negative_sets: problem.negative_sets.clone(),
        n_positive: data.count(ClassLabel::Positive),
        n_negative: data.count(ClassLabel::Negative),
        classifier: config.classifier,
        hyperparameters,
        selected_features: selection.selected_indices.clone(),
        selection_trace: selection.accuracy_trace.clone(),
        cv_folds: config.cv_folds,
        seed: config.seed,
        fold_confusions: outcome.fold_confusions,
        confusion: outcome.confusion,
        metrics: outcome.metrics,
        fold_means: outcome.fold_means,
        non_converged_cells,
    };
    Ok(ProblemOutcome {
        ranking,
        selection,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::FEATURE_COUNT;

    #[test]
    fn defaults() {
        let c = PipelineConfig::default();
        let m = c.mfdfa_config().unwrap();
        assert_eq!(m, MfdfaConfig::default());
        assert_eq!(m.q_values.len(), 101);
        assert_eq!(c.cv_folds, 10);
        c.validate().unwrap();
    }

    #[test]
    fn config_json_round_trip() {
        let c = PipelineConfig {
            classifier: ClassifierKind::Knn,
            feature_convention: FeatureConvention::TableConsistent,
            ..PipelineConfig::default()
        };
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"knn\"") && json.contains("\"table-consistent\""));
        assert_eq!(serde_json::from_str::<PipelineConfig>(&json).unwrap(), c);
        let partial: PipelineConfig = serde_json::from_str(r#"{"seed": 7}"#).unwrap();
        assert_eq!(partial.seed, 7);
        assert!(serde_json::from_str::<PipelineConfig>(r#"{"sed": 7}"#).is_err());
    }

    #[test]
    fn bad_configs() {
        let bad = |f: fn(&mut PipelineConfig)| {
            let mut c = PipelineConfig::default();
            f(&mut c);
            c.validate().is_err()
        };
        assert!(bad(|c| c.q_step = 0.0));
        assert!(bad(|c| c.q_min = 6.0));
        assert!(bad(|c| c.cv_folds = 1));
        assert!(bad(|c| c.c_grid.clear()));
        assert!(bad(|c| c.scale_min = 2000));
    }

    fn vector(id: &str, base: f64) -> FeatureVector {
        let mut values = [0.0; FEATURE_COUNT];
        for (i, v) in values.iter_mut().enumerate() {
            *v = base * (i as f64 + 1.0);
        }
        FeatureVector {
            signal_id: id.into(),
            values,
        }
    }

    #[test]
    fn dataset_assembly() {
        let mut features = BTreeMap::new();
        for (k, set) in BonnSetId::ALL.into_iter().enumerate() {
            features.insert(set, (0..3).map(|i| vector(&format!("{set}{i}"), k as f64)).collect());
        }
        let d = problem_dataset(ProblemId::VI, &features).unwrap();
        assert_eq!(d.len(), 9);
        assert_eq!(d.count(ClassLabel::Positive), 6);
        assert_eq!(d.ids[0], "C0");
        assert_eq!(d.labels[8], ClassLabel::Negative);
        features.remove(&BonnSetId::D);
        assert!(matches!(problem_dataset(ProblemId::VI, &features), Err(Error::MissingSet('D'))));
    }

    #[test]
    fn classifier_names() {
        assert_eq!("SVM".parse::<ClassifierKind>().unwrap(), ClassifierKind::Svm);
        assert_eq!(ClassifierKind::Knn.to_string(), "knn");
        assert!("tree".parse::<ClassifierKind>().is_err());
    }
}
