//! Two-sample t-tests, feature ranking and sequential forward selection.

use std::f64::consts::LN_10;

use serde::{Deserialize, Serialize};

use crate::dataset::{ClassLabel, LabeledDataset};
use crate::error::{Error, Result};

const CF_EPS: f64 = 1e-15;
const CF_MAX_ITER: usize = 10_000;
const CF_TINY: f64 = 1e-300;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0` (Lanczos approximation).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// `ln I_x(a, b)`, the log of the regularized incomplete beta function.
/// `y` must equal `1 − x`; passing it separately avoids cancellation.
pub fn ln_beta_inc_reg(a: f64, b: f64, x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if y <= 0.0 {
        return 0.0;
    }
    let ln_front = a * x.ln() + b * y.ln() - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front + beta_continued_fraction(a, b, x).ln() - a.ln()
    } else {
        let complement = (ln_front + beta_continued_fraction(b, a, y).ln() - b.ln()).exp();
        (-complement).ln_1p()
    }
}

/// Natural log of the two-sided tail probability `P(|T| >= |t|)` for
/// Student's t with `df` degrees of freedom.
pub fn ln_student_t_two_sided(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return f64::NEG_INFINITY;
    }
    let t2 = t * t;
    let denom = df + t2;
    ln_beta_inc_reg(0.5 * df, 0.5, df / denom, t2 / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTest {
    pub t: f64,
    pub df: f64,
    pub p: f64,
    /// `log10(p)`, finite even where `p` underflows.
    pub log10_p: f64,
    /// Both samples have zero variance; `t` is 0 or infinite by convention.
    pub degenerate: bool,
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Welch's unequal-variance two-sample t-test with a two-sided p-value.
pub fn two_sample_t_test(a: &[f64], b: &[f64]) -> Result<TTest> {
    let smallest = a.len().min(b.len());
    if smallest < 2 {
        return Err(Error::InsufficientSamples { required: 2, found: smallest });
    }
    if let Some(index) = a.iter().chain(b).position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteSample { index });
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let (sa, sb) = (va / na, vb / nb);
    let se2 = sa + sb;
    if se2 == 0.0 {
        let df = na + nb - 2.0;
        return Ok(if ma == mb {
            TTest { t: 0.0, df, p: 1.0, log10_p: 0.0, degenerate: true }
        } else {
            TTest {
                t: f64::INFINITY.copysign(ma - mb),
                df,
                p: 0.0,
                log10_p: f64::NEG_INFINITY,
                degenerate: true,
            }
        });
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    let ln_p = ln_student_t_two_sided(t, df);
    Ok(TTest {
        t,
        df,
        p: ln_p.exp().clamp(0.0, 1.0),
        log10_p: ln_p / LN_10,
        degenerate: false,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedFeature {
    /// 1-based feature number.
    pub feature_index: usize,
    pub name: String,
    pub t_statistic: f64,
    pub df: f64,
    pub p_value: f64,
    pub log10_p: f64,
    /// (positive class, negative class).
    pub class_means: (f64, f64),
    pub class_stds: (f64, f64),
    pub degenerate: bool,
}

/// Ranks every column by |t| of a positive-vs-negative Welch test; ties keep
/// the lower feature number first.
pub fn rank_features(data: &LabeledDataset) -> Result<Vec<RankedFeature>> {
    let n_pos = data.count(ClassLabel::Positive);
    let n_neg = data.count(ClassLabel::Negative);
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }
    let mut ranked = Vec::with_capacity(data.dim());
    for c in 0..data.dim() {
        let (pos, neg): (Vec<_>, Vec<_>) = data
            .rows
            .iter()
            .zip(&data.labels)
            .partition(|(_, &l)| l == ClassLabel::Positive);
        let pos: Vec<f64> = pos.iter().map(|(r, _)| r[c]).collect();
        let neg: Vec<f64> = neg.iter().map(|(r, _)| r[c]).collect();
        let test = two_sample_t_test(&pos, &neg)?;
        let (mp, vp) = mean_var(&pos);
        let (mn, vn) = mean_var(&neg);
        ranked.push(RankedFeature {
            feature_index: c + 1,
            name: data.feature_names[c].clone(),
            t_statistic: test.t,
            df: test.df,
            p_value: test.p,
            log10_p: test.log10_p,
            class_means: (mp, mn),
            class_stds: (vp.sqrt(), vn.sqrt()),
            degenerate: test.degenerate,
        });
    }
    ranked.sort_by(|a, b| {
        b.t_statistic
            .abs()
            .total_cmp(&a.t_statistic.abs())
            .then(a.feature_index.cmp(&b.feature_index))
    });
    Ok(ranked)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    /// 1-based feature numbers, in the order they were added.
    pub selected_indices: Vec<usize>,
    /// Accuracy after each evaluated addition, including the final one that
    /// failed to improve (when the ranking was not exhausted).
    pub accuracy_trace: Vec<f64>,
    pub best_accuracy: f64,
}

/// Grows a feature subset in rank order, stopping at the first addition that
/// does not strictly improve the evaluator's score. The evaluator receives
/// 0-based column indices.
pub fn sequential_forward_select<F>(ranked: &[RankedFeature], mut evaluator: F) -> Result<SelectionResult>
where
    F: FnMut(&[usize]) -> Result<f64>,
{
    let Some(first) = ranked.first() else {
        return Err(Error::InvalidParameter("no ranked features to select from".into()));
    };
    let mut columns = vec![first.feature_index - 1];
    let mut best = evaluator(&columns)?;
    let mut trace = vec![best];
    for candidate in &ranked[1..] {
        columns.push(candidate.feature_index - 1);
        let score = evaluator(&columns)?;
        trace.push(score);
        if score > best {
            best = score;
        } else {
            columns.pop();
            break;
        }
    }
    Ok(SelectionResult {
        selected_indices: columns.iter().map(|c| c + 1).collect(),
        accuracy_trace: trace,
        best_accuracy: best,
    })
}
