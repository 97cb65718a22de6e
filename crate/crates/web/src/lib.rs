//! wasm-bindgen bindings for the browser demo in `www/`.
//!
//! Every export returns a JSON string holding plot-ready curves; the plain
//! Rust functions underneath are what the native tests exercise.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use mfdfa_core::mfdfa::{analyze_samples, q_grid, HurstCurve, MfdfaConfig, Q_MATCH_TOL};
use mfdfa_core::spectrum::singularity_spectrum;
use mfdfa_core::synth::{analytic_binomial_hurst, gen_binomial_cascade, gen_fgn, gen_white_noise, CascadeSpec};
use mfdfa_core::MfdfaResult;

const MAX_SAMPLES: usize = 1 << 18;

#[derive(Debug, Serialize)]
pub struct Curves {
    pub label: String,
    pub n_samples: usize,
    pub q: Vec<f64>,
    pub h: Vec<f64>,
    pub tau: Vec<f64>,
    pub alpha: Vec<f64>,
    pub f: Vec<f64>,
    pub h2: Option<f64>,
    pub width: f64,
    pub scales: Vec<usize>,
}

impl Curves {
    fn from_parts(label: String, n_samples: usize, q: Vec<f64>, h: Vec<f64>, scales: Vec<usize>) -> Result<Self, String> {
        let hurst = HurstCurve::from_exponents(q.clone(), h.clone());
        let spectrum = singularity_spectrum(&hurst).map_err(|e| e.to_string())?;
        let width = spectrum.width();
        Ok(Self {
            label,
            n_samples,
            h2: q.iter().position(|v| (v - 2.0).abs() < Q_MATCH_TOL).map(|i| h[i]),
            q,
            h,
            tau: spectrum.tau,
            alpha: spectrum.alpha,
            f: spectrum.f_alpha,
            width,
            scales,
        })
    }

    fn from_result(label: String, n_samples: usize, r: &MfdfaResult) -> Result<Self, String> {
        let h = r.hurst.exponents().map_err(|e| e.to_string())?;
        Self::from_parts(label, n_samples, r.hurst.q_values.clone(), h, r.scales().to_vec())
    }
}

/// Default analysis settings with the largest scale capped at a quarter of
/// the series.
pub fn config_for(len: usize, detrend_order: usize) -> MfdfaConfig {
    let d = MfdfaConfig::default();
    MfdfaConfig {
        scale_max: (len / 4).min(d.scale_max),
        detrend_order,
        ..d
    }
}

fn analyze(label: String, samples: &[f64], detrend_order: usize) -> Result<String, String> {
    let config = config_for(samples.len(), detrend_order);
    let r = analyze_samples(&label, samples, &config).map_err(|e| e.to_string())?;
    let curves = Curves::from_result(label, samples.len(), &r)?;
    serde_json::to_string(&curves).map_err(|e| e.to_string())
}

/// `kind` is `white`, `fgn` (param = Hurst exponent) or `cascade`
/// (param = multiplier). The series has `2^log2_len` samples.
pub fn synthetic_curves(kind: &str, param: f64, log2_len: u32, seed: u64, detrend_order: usize) -> Result<String, String> {
    if !(8..=18).contains(&log2_len) {
        return Err(format!("length must be 2^8 .. 2^18, got 2^{log2_len}"));
    }
    let n = 1usize << log2_len;
    let series = match kind {
        "white" => gen_white_noise(n, seed),
        "fgn" => gen_fgn(n, param, seed),
        "cascade" => gen_binomial_cascade(&CascadeSpec {
            levels: log2_len,
            multiplier_a: param,
            seed: Some(seed),
        }),
        other => return Err(format!("unknown signal kind {other:?}")),
    }
    .map_err(|e| e.to_string())?;
    analyze(format!("{kind} n={n}"), &series.samples, detrend_order)
}

/// Closed-form curves of the binomial cascade with multiplier `a`.
pub fn cascade_theory_curves(a: f64) -> Result<String, String> {
    if !(a > 0.5 && a < 1.0) {
        return Err(format!("multiplier must lie in (0.5, 1), got {a}"));
    }
    let q = q_grid(-5.0, 5.0, 0.1);
    let h = q.iter().map(|&q| analytic_binomial_hurst(q, a)).collect();
    let curves = Curves::from_parts(format!("theory a={a}"), 0, q, h, Vec::new())?;
    serde_json::to_string(&curves).map_err(|e| e.to_string())
}

/// Parses numbers separated by whitespace, commas or semicolons.
pub fn parse_samples(text: &str) -> Result<Vec<f64>, String> {
    let samples = text
        .split(|c: char| c.is_whitespace() || c == ',' || c == ';')
        .filter(|t| !t.is_empty())
        .enumerate()
        .map(|(i, t)| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("value {} ({t:?}) is not a finite number", i + 1))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if samples.len() > MAX_SAMPLES {
        return Err(format!("at most {MAX_SAMPLES} samples, got {}", samples.len()));
    }
    Ok(samples)
}

pub fn text_curves(text: &str, detrend_order: usize) -> Result<String, String> {
    let samples = parse_samples(text)?;
    if samples.len() < 128 {
        return Err(format!("need at least 128 samples, got {}", samples.len()));
    }
    analyze("pasted".into(), &samples, detrend_order)
}

#[wasm_bindgen(js_name = analyzeSynthetic)]
pub fn analyze_synthetic(kind: &str, param: f64, log2_len: u32, seed: u32, detrend_order: u32) -> Result<String, JsValue> {
    synthetic_curves(kind, param, log2_len, u64::from(seed), detrend_order as usize).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = cascadeTheory)]
pub fn cascade_theory(a: f64) -> Result<String, JsValue> {
    cascade_theory_curves(a).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = analyzeText)]
pub fn analyze_text(text: &str, detrend_order: u32) -> Result<String, JsValue> {
    text_curves(text, detrend_order as usize).map_err(|e| JsValue::from_str(&e))
}
