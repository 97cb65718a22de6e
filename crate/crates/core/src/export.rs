//! CSV and JSON serialization of curves, features, rankings and reports.
//!
//! Floats are written in Rust's shortest round-trip form (exponent notation
//! for very small or large magnitudes), so files are byte-stable across runs
//! and parse back to the exact same values.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{feature_names, FeatureVector, FEATURE_COUNT};
use crate::mfdfa::{MfdfaResult, Q_MATCH_TOL};
use crate::pipeline::EvaluationReport;
use crate::stats::RankedFeature;

pub(crate) fn num(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Plot-ready curves of one analysis, or the pointwise mean of several.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveData {
    pub signal_id: String,
    pub q_values: Vec<f64>,
    pub h: Vec<Option<f64>>,
    pub r2: Vec<Option<f64>>,
    pub tau: Vec<f64>,
    pub alpha: Vec<f64>,
    pub f_alpha: Vec<f64>,
}

impl CurveData {
    pub fn from_result(result: &MfdfaResult) -> Self {
        Self {
            signal_id: result.signal_id.clone(),
            q_values: result.hurst.q_values.clone(),
            h: result.hurst.h.clone(),
            r2: result.hurst.fit_r2.clone(),
            tau: result.spectrum.tau.clone(),
            alpha: result.spectrum.alpha.clone(),
            f_alpha: result.spectrum.f_alpha.clone(),
        }
    }

    /// Pointwise mean over curves that share a q-grid. Missing values are
    /// left out of the average.
    pub fn mean(signal_id: impl Into<String>, curves: &[CurveData]) -> Result<Self> {
        let first = curves
            .first()
            .ok_or_else(|| Error::InvalidParameter("no curves to average".into()))?;
        let n_q = first.q_values.len();
        for c in curves {
            let same = c.q_values.len() == n_q
                && c.q_values
                    .iter()
                    .zip(&first.q_values)
                    .all(|(a, b)| (a - b).abs() <= Q_MATCH_TOL);
            if !same || c.tau.len() != n_q || c.alpha.len() != n_q {
                return Err(Error::InvalidParameter(format!(
                    "curve {} has a different q-grid",
                    c.signal_id
                )));
            }
        }
        let mean_opt = |get: &dyn Fn(&CurveData) -> Option<f64>| -> Option<f64> {
            let v: Vec<f64> = curves.iter().filter_map(get).collect();
            (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
        };
        let mean = |get: &dyn Fn(&CurveData) -> f64| -> f64 {
            curves.iter().map(get).sum::<f64>() / curves.len() as f64
        };
        Ok(Self {
            signal_id: signal_id.into(),
            q_values: first.q_values.clone(),
            h: (0..n_q).map(|i| mean_opt(&|c| c.h[i])).collect(),
            r2: (0..n_q).map(|i| mean_opt(&|c| c.r2[i])).collect(),
            tau: (0..n_q).map(|i| mean(&|c| c.tau[i])).collect(),
            alpha: (0..n_q).map(|i| mean(&|c| c.alpha[i])).collect(),
            f_alpha: (0..n_q).map(|i| mean(&|c| c.f_alpha[i])).collect(),
        })
    }

    pub fn width(&self) -> f64 {
        let lo = self.alpha.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.alpha.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    Ok(csv::Writer::from_path(path)?)
}

/// Writes `hq.csv`, `tau.csv` and `spectrum.csv` into `dir`.
pub fn write_curves(dir: &Path, curves: &CurveData) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut hq = csv_writer(&dir.join("hq.csv"))?;
    hq.write_record(["q", "h", "r2"])?;
    for i in 0..curves.q_values.len() {
        hq.write_record([num(curves.q_values[i]), opt(curves.h[i]), opt(curves.r2[i])])?;
    }
    hq.flush()?;
    let mut tau = csv_writer(&dir.join("tau.csv"))?;
    tau.write_record(["q", "tau"])?;
    for (q, t) in curves.q_values.iter().zip(&curves.tau) {
        tau.write_record([num(*q), num(*t)])?;
    }
    tau.flush()?;
    let mut spec = csv_writer(&dir.join("spectrum.csv"))?;
    spec.write_record(["alpha", "f"])?;
    for (a, f) in curves.alpha.iter().zip(&curves.f_alpha) {
        spec.write_record([num(*a), num(*f)])?;
    }
    spec.flush()?;
    Ok(())
}

/// One feature vector with the name of the set (or class) it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRecord {
    pub signal_id: String,
    pub label: String,
    pub values: [f64; FEATURE_COUNT],
}

impl FeatureRecord {
    pub fn new(features: &FeatureVector, label: impl Into<String>) -> Self {
        Self {
            signal_id: features.signal_id.clone(),
            label: label.into(),
            values: features.values,
        }
    }

    pub fn to_vector(&self) -> FeatureVector {
        FeatureVector {
            signal_id: self.signal_id.clone(),
            values: self.values,
        }
    }
}

fn feature_header() -> Vec<String> {
    let mut header = feature_names();
    header.push("label".into());
    header.push("signal_id".into());
    header
}

pub fn write_features_csv(path: &Path, records: &[FeatureRecord]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(feature_header())?;
    for r in records {
        let mut row: Vec<String> = r.values.iter().map(|v| num(*v)).collect();
        row.push(r.label.clone());
        row.push(r.signal_id.clone());
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_features_csv(path: &Path) -> Result<Vec<FeatureRecord>> {
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != feature_header() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            content: header.join(","),
        });
    }
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let bad = |content: &str| Error::Parse {
            path: path.to_path_buf(),
            line: i + 2,
            content: content.to_string(),
        };
        let mut values = [0.0; FEATURE_COUNT];
        for (k, v) in values.iter_mut().enumerate() {
            let field = &record[k];
            *v = field.parse().map_err(|_| bad(field))?;
        }
        out.push(FeatureRecord {
            values,
            label: record[FEATURE_COUNT].to_string(),
            signal_id: record[FEATURE_COUNT + 1].to_string(),
        });
    }
    Ok(out)
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let mut f = std::io::BufWriter::new(fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(())
}

/// Per-feature class statistics and test results in rank order.
pub fn write_ranking_csv(path: &Path, ranked: &[RankedFeature]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "rank",
        "feature",
        "positive_mean",
        "positive_std",
        "negative_mean",
        "negative_std",
        "t",
        "df",
        "p_value",
        "log10_p",
    ])?;
    for (i, r) in ranked.iter().enumerate() {
        w.write_record([
            (i + 1).to_string(),
            r.name.clone(),
            num(r.class_means.0),
            num(r.class_stds.0),
            num(r.class_means.1),
            num(r.class_stds.1),
            num(r.t_statistic),
            num(r.df),
            num(r.p_value),
            num(r.log10_p),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One row per evaluated problem.
pub fn write_reports_csv(path: &Path, reports: &[EvaluationReport]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "problem",
        "sets",
        "classifier",
        "c_penalty",
        "gamma",
        "k",
        "features",
        "accuracy",
        "sensitivity",
        "specificity",
        "tp",
        "tn",
        "fp",
        "fn",
    ])?;
    for r in reports {
        let sets = |s: &[crate::ingest::BonnSetId]| s.iter().map(|x| x.letter()).collect::<String>();
        let features = r
            .selected_features
            .iter()
            .map(|f| format!("f{f}"))
            .collect::<Vec<_>>()
            .join(" ");
        w.write_record([
            r.problem_id.to_string(),
            format!("{},{}", sets(&r.positive_sets), sets(&r.negative_sets)),
            r.classifier.to_string(),
            opt(r.hyperparameters.c_penalty),
            opt(r.hyperparameters.gamma),
            r.hyperparameters.k.map(|k| k.to_string()).unwrap_or_default(),
            features,
            opt(r.metrics.accuracy),
            opt(r.metrics.sensitivity),
            opt(r.metrics.specificity),
            r.confusion.tp.to_string(),
            r.confusion.tn.to_string(),
            r.confusion.fp.to_string(),
            r.confusion.fn_.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
