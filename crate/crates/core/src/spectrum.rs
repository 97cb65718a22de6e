//! Mass exponents and the singularity spectrum obtained from a Hurst curve
//! through the Legendre relations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mfdfa::HurstCurve;

/// Maximum-f values closer than this count as tied.
pub const PEAK_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularitySpectrum {
    pub q_values: Vec<f64>,
    pub tau: Vec<f64>,
    pub alpha: Vec<f64>,
    pub f_alpha: Vec<f64>,
}

impl SingularitySpectrum {
    pub fn width(&self) -> f64 {
        let (lo, hi) = min_max(&self.alpha);
        hi - lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDescriptors {
    pub alpha_peak: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub f_at_alpha_min: f64,
    pub f_at_alpha_max: f64,
    pub f_at_peak: f64,
}

/// `τ(q) = q·h(q) − 1`.
pub fn scaling_exponents(hurst: &HurstCurve) -> Result<Vec<f64>> {
    let h = hurst.exponents()?;
    Ok(hurst
        .q_values
        .iter()
        .zip(&h)
        .map(|(q, h)| q * h - 1.0)
        .collect())
}

/// Three-point derivative on a possibly non-uniform grid; second-order
/// one-sided stencils at both ends.
pub fn grid_derivative(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if n < 3 || y.len() != n {
        return Err(Error::GridTooCoarse { points: n.min(y.len()) });
    }
    let mut d = Vec::with_capacity(n);
    {
        let (h1, h2) = (x[1] - x[0], x[2] - x[1]);
        d.push(
            -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * y[0] + (h1 + h2) / (h1 * h2) * y[1]
                - h1 / (h2 * (h1 + h2)) * y[2],
        );
    }
    for i in 1..n - 1 {
        let (h1, h2) = (x[i] - x[i - 1], x[i + 1] - x[i]);
        d.push(
            -h2 / (h1 * (h1 + h2)) * y[i - 1]
                + (h2 - h1) / (h1 * h2) * y[i]
                + h1 / (h2 * (h1 + h2)) * y[i + 1],
        );
    }
    {
        let (h1, h2) = (x[n - 2] - x[n - 3], x[n - 1] - x[n - 2]);
        d.push(
            h2 / (h1 * (h1 + h2)) * y[n - 3] - (h1 + h2) / (h1 * h2) * y[n - 2]
                + (2.0 * h2 + h1) / (h2 * (h1 + h2)) * y[n - 1],
        );
    }
    Ok(d)
}

/// `α = h + q·h'` and `f(α) = q(α − h) + 1`, with `h'` from finite differences.
pub fn singularity_spectrum(hurst: &HurstCurve) -> Result<SingularitySpectrum> {
    let q = &hurst.q_values;
    if q.len() < 3 {
        return Err(Error::GridTooCoarse { points: q.len() });
    }
    let h = hurst.exponents()?;
    let dh = grid_derivative(q, &h)?;
    let alpha: Vec<f64> = q
        .iter()
        .zip(&h)
        .zip(&dh)
        .map(|((q, h), dh)| h + q * dh)
        .collect();
    let f_alpha = q
        .iter()
        .zip(&h)
        .zip(&alpha)
        .map(|((q, h), a)| q * (a - h) + 1.0)
        .collect();
    Ok(SingularitySpectrum {
        q_values: q.clone(),
        tau: scaling_exponents(hurst)?,
        alpha,
        f_alpha,
    })
}

/// Extremes and peak of a spectrum. The peak is the grid point of largest
/// `f`; among ties the one with q nearest zero wins.
pub fn spectrum_descriptors(spec: &SingularitySpectrum) -> Result<SpectrumDescriptors> {
    let n = spec.alpha.len();
    if n == 0 || spec.f_alpha.len() != n || spec.q_values.len() != n {
        return Err(Error::GridTooCoarse { points: n });
    }
    let f_max = spec.f_alpha.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let peak = (0..n)
        .filter(|&i| f_max - spec.f_alpha[i] <= PEAK_TIE_TOL)
        .min_by(|&a, &b| spec.q_values[a].abs().total_cmp(&spec.q_values[b].abs()))
        .unwrap_or(0);
    let argmin = (0..n)
        .min_by(|&a, &b| spec.alpha[a].total_cmp(&spec.alpha[b]))
        .unwrap_or(0);
    let argmax = (0..n)
        .max_by(|&a, &b| spec.alpha[a].total_cmp(&spec.alpha[b]).then(b.cmp(&a)))
        .unwrap_or(0);
    Ok(SpectrumDescriptors {
        alpha_peak: spec.alpha[peak],
        alpha_min: spec.alpha[argmin],
        alpha_max: spec.alpha[argmax],
        f_at_alpha_min: spec.f_alpha[argmin],
        f_at_alpha_max: spec.f_alpha[argmax],
        f_at_peak: spec.f_alpha[peak],
    })
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    })
}
