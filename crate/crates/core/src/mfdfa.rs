//! Multifractal detrended fluctuation analysis.
//!
//! The pipeline is: integrate the mean-removed signal into a profile, cut the
//! profile into non-overlapping segments from both ends, detrend each segment
//! with a least-squares polynomial, average the segment variances into q-order
//! fluctuation functions and regress `ln F_q(s)` on `ln s` for every q.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{check_finite, TimeSeries};
use crate::spectrum::{singularity_spectrum, SingularitySpectrum};

/// Tolerance used when matching q values that are meant to be exact (0 and 2).
pub const Q_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MfdfaConfig {
    /// Moment orders, strictly increasing.
    pub q_values: Vec<f64>,
    pub scale_min: usize,
    pub scale_max: usize,
    /// Number of logarithmic intervals between `scale_min` and `scale_max`;
    /// the grid has one more point than this before deduplication.
    pub scale_intervals: usize,
    /// Order of the detrending polynomial.
    pub detrend_order: usize,
    /// Fewest scales a q-row may be regressed on.
    pub min_fit_scales: usize,
}

impl Default for MfdfaConfig {
    fn default() -> Self {
        Self {
            q_values: q_grid(-5.0, 5.0, 0.1),
            scale_min: 16,
            scale_max: 1024,
            scale_intervals: 19,
            detrend_order: 1,
            min_fit_scales: 4,
        }
    }
}

impl MfdfaConfig {
    /// Checks the invariants that do not depend on the analyzed series.
    pub fn validate(&self) -> Result<()> {
        let q = &self.q_values;
        if q.windows(2).any(|w| !(w[0] < w[1])) || q.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig(
                "q values must be finite and strictly increasing".into(),
            ));
        }
        if !q.iter().any(|&v| (v - 2.0).abs() < Q_MATCH_TOL) {
            return Err(Error::MissingQ2);
        }
        if !(q.iter().any(|&v| v < 0.0) && q.iter().any(|&v| v > 0.0)) {
            return Err(Error::InvalidConfig(
                "q values must span negative and positive orders".into(),
            ));
        }
        if self.detrend_order < 1 {
            return Err(Error::InvalidConfig("detrend order must be at least 1".into()));
        }
        if self.scale_min < 4 || self.scale_min >= self.scale_max {
            return Err(Error::InvalidConfig(format!(
                "need 4 <= scale_min < scale_max, got {}..{}",
                self.scale_min, self.scale_max
            )));
        }
        if self.detrend_order + 2 > self.scale_min {
            return Err(Error::InvalidConfig(format!(
                "scale_min {} is too small for detrend order {}",
                self.scale_min, self.detrend_order
            )));
        }
        if self.min_fit_scales < 2 {
            return Err(Error::InvalidConfig("min_fit_scales must be at least 2".into()));
        }
        Ok(())
    }

    /// Checks the invariants tying the configuration to a series length.
    pub fn validate_for_length(&self, len: usize) -> Result<()> {
        if len < 2 * self.scale_min {
            return Err(Error::SeriesTooShort {
                len,
                required: 2 * self.scale_min,
            });
        }
        if 4 * self.scale_max > len {
            return Err(Error::SeriesTooShort {
                len,
                required: 4 * self.scale_max,
            });
        }
        Ok(())
    }
}

/// Uniform q-grid from `min` to `max` inclusive, with every point snapped to
/// 1e-9 so that decimal steps land exactly on 0 and 2.
pub fn q_grid(min: f64, max: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && max >= min, "q grid needs step > 0 and max >= min");
    let n = ((max - min) / step).round() as usize;
    (0..=n)
        .map(|i| {
            let q = min + i as f64 * step;
            (q * 1e9).round() / 1e9
        })
        .collect()
}

/// Mean-removed cumulative sum of the samples.
pub fn build_profile(series: &TimeSeries) -> Result<Vec<f64>> {
    profile_of(&series.samples)
}

pub fn profile_of(samples: &[f64]) -> Result<Vec<f64>> {
    check_finite(samples)?;
    if samples.is_empty() {
        return Ok(Vec::new());
    }
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let mut acc = 0.0;
    Ok(samples
        .iter()
        .map(|x| {
            acc += x - mean;
            acc
        })
        .collect())
}

/// Logarithmically spaced, rounded and deduplicated scales.
pub fn make_scale_grid(config: &MfdfaConfig) -> Result<Vec<usize>> {
    let (lo, hi) = (config.scale_min, config.scale_max);
    let required = config.min_fit_scales;
    if lo == 0 || hi <= lo || config.scale_intervals == 0 {
        return Err(Error::DegenerateGrid {
            scales: usize::from(lo > 0 && hi >= lo),
            required,
        });
    }
    let (ln_lo, ln_hi) = ((lo as f64).ln(), (hi as f64).ln());
    let k = config.scale_intervals;
    let mut scales: Vec<usize> = (0..=k)
        .map(|i| match i {
            0 => lo,
            i if i == k => hi,
            i => (ln_lo + (ln_hi - ln_lo) * i as f64 / k as f64).exp().round() as usize,
        })
        .collect();
    scales.dedup();
    if scales.len() < required {
        return Err(Error::DegenerateGrid {
            scales: scales.len(),
            required,
        });
    }
    Ok(scales)
}

/// Orthonormal polynomial basis on the points of one segment, so that the
/// least-squares residual is a projection.
#[derive(Debug, Clone)]
pub struct DetrendBasis {
    scale: usize,
    columns: Vec<Vec<f64>>,
}

impl DetrendBasis {
    pub fn new(scale: usize, order: usize) -> Result<Self> {
        if scale < order + 1 {
            return Err(Error::FitUnderdetermined {
                points: scale,
                order,
            });
        }
        let half = (scale as f64 - 1.0) / 2.0;
        let t: Vec<f64> = (0..scale)
            .map(|i| if half > 0.0 { (i as f64 - half) / half } else { 0.0 })
            .collect();
        let mut columns: Vec<Vec<f64>> = Vec::with_capacity(order + 1);
        for power in 0..=order {
            let mut v: Vec<f64> = t.iter().map(|x| x.powi(power as i32)).collect();
            // two Gram-Schmidt passes keep the basis orthonormal to rounding
            for _ in 0..2 {
                for c in &columns {
                    let d = dot(c, &v);
                    v.iter_mut().zip(c).for_each(|(vi, ci)| *vi -= d * ci);
                }
            }
            let norm = dot(&v, &v).sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
            columns.push(v);
        }
        Ok(Self { scale, columns })
    }

    pub fn scale(&self) -> usize {
        self.scale
    }

    /// Mean squared residual of the least-squares fit to `segment`.
    pub fn residual_variance(&self, segment: &[f64], scratch: &mut Vec<f64>) -> f64 {
        debug_assert_eq!(segment.len(), self.scale);
        scratch.clear();
        scratch.extend_from_slice(segment);
        for c in &self.columns {
            let d = dot(c, scratch);
            scratch.iter_mut().zip(c).for_each(|(r, ci)| *r -= d * ci);
        }
        dot(scratch, scratch) / self.scale as f64
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Detrended variances of the `2 N_s` segments at one scale: the first `N_s`
/// entries come from segmenting the profile from its start, the rest from its
/// end, counting backwards.
pub fn segment_variances(profile: &[f64], scale: usize, detrend_order: usize) -> Result<Vec<f64>> {
    let basis = DetrendBasis::new(scale, detrend_order)?;
    segment_variances_with(profile, &basis)
}

fn segment_variances_with(profile: &[f64], basis: &DetrendBasis) -> Result<Vec<f64>> {
    let n = profile.len();
    let s = basis.scale();
    let count = if s == 0 { 0 } else { n / s };
    if count < 1 {
        return Err(Error::ScaleTooLarge { scale: s, len: n });
    }
    let mut scratch = Vec::with_capacity(s);
    let forward = (0..count).map(|v| v * s);
    let backward = (0..count).map(|v| n - (v + 1) * s);
    Ok(forward
        .chain(backward)
        .map(|start| basis.residual_variance(&profile[start..start + s], &mut scratch))
        .collect())
}

/// q-order generalized mean of the segment variances, `{mean (S²)^(q/2)}^(1/q)`.
///
/// `q = 0` uses the logarithmic average `exp(mean(ln S²) / 2)`. For `q <= 0`
/// zero variances are dropped from the average.
pub fn fluctuation_function(variances: &[f64], q: f64) -> Result<f64> {
    if variances.is_empty() {
        return Err(Error::InvalidParameter("no segment variances".into()));
    }
    if q <= Q_MATCH_TOL {
        let logs: Vec<f64> = variances
            .iter()
            .filter(|&&v| v > 0.0)
            .map(|v| v.ln())
            .collect();
        if logs.is_empty() {
            return Err(Error::AllZeroVariance { q });
        }
        if logs.len() < variances.len() {
            warn!(
                "q = {q}: excluding {} zero-variance segments",
                variances.len() - logs.len()
            );
        }
        let n = logs.len() as f64;
        if q.abs() < Q_MATCH_TOL {
            return Ok((0.5 * logs.iter().sum::<f64>() / n).exp());
        }
        let powered: Vec<f64> = logs.iter().map(|l| 0.5 * q * l).collect();
        return Ok(((log_sum_exp(&powered) - n.ln()) / q).exp());
    }
    let powered: Vec<f64> = variances.iter().map(|v| 0.5 * q * v.ln()).collect();
    let lse = log_sum_exp(&powered);
    if lse == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    Ok(((lse - (variances.len() as f64).ln()) / q).exp())
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// `F_q(s)` indexed `[q][scale]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluctuationSurface {
    pub scales: Vec<usize>,
    pub q_values: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

pub fn fluctuation_surface(
    profile: &[f64],
    scales: &[usize],
    q_values: &[f64],
    detrend_order: usize,
) -> Result<FluctuationSurface> {
    let mut values = vec![Vec::with_capacity(scales.len()); q_values.len()];
    for &scale in scales {
        let basis = DetrendBasis::new(scale, detrend_order)?;
        let variances = segment_variances_with(profile, &basis)?;
        for (row, &q) in values.iter_mut().zip(q_values) {
            row.push(fluctuation_function(&variances, q)?);
        }
    }
    Ok(FluctuationSurface {
        scales: scales.to_vec(),
        q_values: q_values.to_vec(),
        values,
    })
}

/// Generalized Hurst exponents, one log-log fit per q. Rows with too few
/// usable scales carry `None` instead of a slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HurstCurve {
    pub q_values: Vec<f64>,
    pub h: Vec<Option<f64>>,
    pub intercept: Vec<Option<f64>>,
    pub fit_r2: Vec<Option<f64>>,
    pub usable_scales: Vec<usize>,
    pub min_fit_scales: usize,
}

impl HurstCurve {
    /// Builds a fully populated curve from known exponents.
    pub fn from_exponents(q_values: Vec<f64>, h: Vec<f64>) -> Self {
        let n = q_values.len();
        Self {
            q_values,
            h: h.into_iter().map(Some).collect(),
            intercept: vec![None; n],
            fit_r2: vec![None; n],
            usable_scales: vec![0; n],
            min_fit_scales: 0,
        }
    }

    /// All exponents, or the first q that could not be fitted.
    pub fn exponents(&self) -> Result<Vec<f64>> {
        self.h
            .iter()
            .enumerate()
            .map(|(i, h)| {
                h.ok_or(Error::InsufficientScales {
                    q: self.q_values[i],
                    usable: self.usable_scales[i],
                    required: self.min_fit_scales,
                })
            })
            .collect()
    }

    pub fn at(&self, q: f64) -> Option<f64> {
        let i = self
            .q_values
            .iter()
            .position(|&v| (v - q).abs() < Q_MATCH_TOL)?;
        self.h[i]
    }
}

/// Ordinary least squares `y = slope·x + intercept`, with r².
pub(crate) fn ols(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res = syy - slope * sxy;
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    (slope, intercept, r2)
}

/// Slope of `ln F_q(s)` against `ln s` for every q; non-finite or
/// non-positive entries are left out of their row's fit.
pub fn fit_hurst(surface: &FluctuationSurface, min_fit_scales: usize) -> HurstCurve {
    let n = surface.q_values.len();
    let mut curve = HurstCurve {
        q_values: surface.q_values.clone(),
        h: Vec::with_capacity(n),
        intercept: Vec::with_capacity(n),
        fit_r2: Vec::with_capacity(n),
        usable_scales: Vec::with_capacity(n),
        min_fit_scales,
    };
    for row in &surface.values {
        let (xs, ys): (Vec<f64>, Vec<f64>) = surface
            .scales
            .iter()
            .zip(row)
            .filter(|(_, f)| f.is_finite() && **f > 0.0)
            .map(|(&s, f)| ((s as f64).ln(), f.ln()))
            .unzip();
        curve.usable_scales.push(xs.len());
        if xs.len() >= min_fit_scales.max(2) {
            let (slope, intercept, r2) = ols(&xs, &ys);
            curve.h.push(Some(slope));
            curve.intercept.push(Some(intercept));
            curve.fit_r2.push(Some(r2));
        } else {
            curve.h.push(None);
            curve.intercept.push(None);
            curve.fit_r2.push(None);
        }
    }
    curve
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MfdfaResult {
    pub signal_id: String,
    pub surface: FluctuationSurface,
    pub hurst: HurstCurve,
    pub spectrum: SingularitySpectrum,
}

impl MfdfaResult {
    pub fn scales(&self) -> &[usize] {
        &self.surface.scales
    }
}

/// Full analysis of one series.
pub fn mfdfa(series: &TimeSeries, config: &MfdfaConfig) -> Result<MfdfaResult> {
    analyze_samples(&series.id, &series.samples, config)
}

pub fn analyze_samples(id: &str, samples: &[f64], config: &MfdfaConfig) -> Result<MfdfaResult> {
    config.validate()?;
    config.validate_for_length(samples.len())?;
    let profile = profile_of(samples)?;
    let scales = make_scale_grid(config)?;
    let surface = fluctuation_surface(&profile, &scales, &config.q_values, config.detrend_order)?;
    let hurst = fit_hurst(&surface, config.min_fit_scales);
    hurst.exponents()?;
    let spectrum = singularity_spectrum(&hurst)?;
    Ok(MfdfaResult {
        signal_id: id.to_string(),
        surface,
        hurst,
        spectrum,
    })
}
