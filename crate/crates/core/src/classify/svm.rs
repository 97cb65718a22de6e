//! Soft-margin RBF support vector machine trained by sequential minimal
//! optimization.
//!
//! The dual is `min ½ αᵀQα − eᵀα` subject to `0 ≤ α ≤ C` and `yᵀα = 0`, with
//! `Q_ij = y_i y_j K(x_i, x_j)`. Each iteration picks the index with the
//! largest KKT violation and pairs it with the partner giving the largest
//! second-order decrease of the objective.

use serde::{Deserialize, Serialize};

use super::{squared_distance, squared_distance_matrix, Classifier, Standardizer, Trainer};
use crate::dataset::ClassLabel;
use crate::error::{Error, Result};

const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub c_penalty: f64,
    pub gamma: f64,
    /// Stop once the maximal KKT violation drops below this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl SvmParams {
    pub fn new(c_penalty: f64, gamma: f64) -> Self {
        Self {
            c_penalty,
            gamma,
            tolerance: 1e-3,
            max_iterations: 100_000,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.c_penalty > 0.0 && self.c_penalty.is_finite()) {
            return Err(Error::InvalidParameter(format!("C must be positive, got {}", self.c_penalty)));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("gamma must be positive, got {}", self.gamma)));
        }
        Ok(())
    }
}

/// `exp(−γ‖c − d‖²)`.
pub fn rbf_kernel(c: &[f64], d: &[f64], gamma: f64) -> Result<f64> {
    if c.len() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: c.len(),
            found: d.len(),
        });
    }
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
    }
    Ok((-gamma * squared_distance(c, d)).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    /// Standardized training rows with non-zero multipliers.
    pub support_vectors: Vec<Vec<f64>>,
    /// `α_i y_i` for each support vector.
    pub dual_coefficients: Vec<f64>,
    pub bias: f64,
    pub gamma: f64,
    pub c_penalty: f64,
    pub feature_scaler: Standardizer,
    pub iterations: usize,
    /// Indices of the support vectors in the training set.
    pub support_indices: Vec<usize>,
}

impl SvmModel {
    /// Signed distance-like score; the class is its sign.
    pub fn decision_value(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.feature_scaler.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.feature_scaler.dim(),
                found: x.len(),
            });
        }
        let z = self.feature_scaler.transform(x);
        Ok(self.decision_scaled(&z))
    }

    fn decision_scaled(&self, z: &[f64]) -> f64 {
        let sum: f64 = self
            .support_vectors
            .iter()
            .zip(&self.dual_coefficients)
            .map(|(sv, coef)| coef * (-self.gamma * squared_distance(sv, z)).exp())
            .sum();
        sum + self.bias
    }

    /// Class and decision value; a decision of exactly zero is positive.
    pub fn predict_with_value(&self, x: &[f64]) -> Result<(ClassLabel, f64)> {
        let v = self.decision_value(x)?;
        Ok((ClassLabel::from_sign(v), v))
    }
}

impl Classifier for SvmModel {
    fn predict(&self, x: &[f64]) -> Result<ClassLabel> {
        Ok(self.predict_with_value(x)?.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmTrainer(pub SvmParams);

impl Trainer for SvmTrainer {
    type Model = SvmModel;

    fn train(&self, rows: &[Vec<f64>], labels: &[ClassLabel]) -> Result<SvmModel> {
        train_svm(rows, labels, &self.0)
    }
}

pub(crate) fn check_training_set(rows: &[Vec<f64>], labels: &[ClassLabel]) -> Result<()> {
    if rows.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: rows.len(),
            found: labels.len(),
        });
    }
    let dim = rows.first().map_or(0, Vec::len);
    for r in rows {
        if r.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: r.len() });
        }
        if let Some(index) = r.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
    }
    Ok(())
}

/// Standardizes the rows, then solves the dual with SMO.
pub fn train_svm(rows: &[Vec<f64>], labels: &[ClassLabel], params: &SvmParams) -> Result<SvmModel> {
    params.validate()?;
    check_training_set(rows, labels)?;
    let has = |l| labels.contains(&l);
    if !(has(ClassLabel::Positive) && has(ClassLabel::Negative)) {
        return Err(Error::SingleClass);
    }
    let scaler = Standardizer::fit(rows);
    let scaled: Vec<Vec<f64>> = rows.iter().map(|r| scaler.transform(r)).collect();
    let distances = squared_distance_matrix(&scaled);
    train_from_distances(scaled, &distances, labels, scaler, params)
}

/// Training on already standardized rows whose squared-distance matrix is
/// known, so a hyperparameter sweep can share it.
pub(crate) fn train_from_distances(
    scaled: Vec<Vec<f64>>,
    distances: &[f64],
    labels: &[ClassLabel],
    scaler: Standardizer,
    params: &SvmParams,
) -> Result<SvmModel> {
    let kernel: Vec<f64> = distances.iter().map(|d| (-params.gamma * d).exp()).collect();
    let y: Vec<f64> = labels.iter().map(|l| l.sign()).collect();
    let sol = solve_smo(&kernel, &y, params)?;
    let mut support_vectors = Vec::new();
    let mut dual_coefficients = Vec::new();
    let mut support_indices = Vec::new();
    for (i, row) in scaled.into_iter().enumerate() {
        if sol.alpha[i] > 0.0 {
            support_vectors.push(row);
            dual_coefficients.push(sol.alpha[i] * y[i]);
            support_indices.push(i);
        }
    }
    Ok(SvmModel {
        support_vectors,
        dual_coefficients,
        bias: sol.bias,
        gamma: params.gamma,
        c_penalty: params.c_penalty,
        feature_scaler: scaler,
        iterations: sol.iterations,
        support_indices,
    })
}

#[derive(Debug, Clone)]
pub(crate) struct SmoSolution {
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
}

/// SMO on a precomputed row-major kernel matrix.
pub(crate) fn solve_smo(kernel: &[f64], y: &[f64], params: &SvmParams) -> Result<SmoSolution> {
    let n = y.len();
    let c = params.c_penalty;
    let k = |i: usize, j: usize| kernel[i * n + j];
    let mut alpha = vec![0.0; n];
    // gradient of the dual objective, Qα − e
    let mut grad = vec![-1.0; n];

    let in_up = |a: f64, y: f64| (y > 0.0 && a < c) || (y < 0.0 && a > 0.0);
    let in_low = |a: f64, y: f64| (y > 0.0 && a > 0.0) || (y < 0.0 && a < c);

    let mut iterations = 0;
    loop {
        let mut g_max = f64::NEG_INFINITY;
        let mut i_sel = None;
        for t in 0..n {
            if in_up(alpha[t], y[t]) {
                let v = -y[t] * grad[t];
                if v > g_max {
                    g_max = v;
                    i_sel = Some(t);
                }
            }
        }
        let mut g_max2 = f64::NEG_INFINITY;
        let mut j_sel = None;
        let mut best_obj = f64::INFINITY;
        if let Some(i) = i_sel {
            for t in 0..n {
                if !in_low(alpha[t], y[t]) {
                    continue;
                }
                let v = y[t] * grad[t];
                g_max2 = g_max2.max(v);
                let b = g_max + v;
                if b > 0.0 {
                    let mut a = k(i, i) + k(t, t) - 2.0 * k(i, t);
                    if a <= 0.0 {
                        a = TAU;
                    }
                    let obj = -b * b / a;
                    if obj <= best_obj {
                        best_obj = obj;
                        j_sel = Some(t);
                    }
                }
            }
        }
        let gap = g_max + g_max2;
        let (Some(i), Some(j)) = (i_sel, j_sel) else {
            break;
        };
        if gap < params.tolerance {
            break;
        }
        if iterations >= params.max_iterations {
            return Err(Error::NonConvergence { iterations, gap });
        }
        iterations += 1;

        let (old_i, old_j) = (alpha[i], alpha[j]);
        let qij = y[i] * y[j] * k(i, j);
        if y[i] != y[j] {
            let mut quad = k(i, i) + k(j, j) + 2.0 * qij;
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let mut quad = k(i, i) + k(j, j) - 2.0 * qij;
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += y[t] * (y[i] * k(t, i) * di + y[j] * k(t, j) * dj);
        }
    }

    // offset from the free multipliers, or the midpoint of the feasible range
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut sum_free, mut n_free) = (0.0, 0usize);
    for t in 0..n {
        let yg = y[t] * grad[t];
        let at_upper = alpha[t] >= c;
        let at_lower = alpha[t] <= 0.0;
        if at_upper {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if at_lower {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            sum_free += yg;
            n_free += 1;
        }
    }
    let rho = if n_free > 0 {
        sum_free / n_free as f64
    } else {
        (ub + lb) / 2.0
    };
    Ok(SmoSolution {
        alpha,
        bias: -rho,
        iterations,
    })
}
