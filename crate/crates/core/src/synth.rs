//! Signals with known scaling behaviour, used as ground truth for the analysis.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Step used to approach q = 0 in [`analytic_binomial_hurst`].
const Q_ZERO_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CascadeSpec {
    /// The series has `2^levels` samples.
    pub levels: u32,
    /// Weight given to one child of every split, in (0.5, 1).
    pub multiplier_a: f64,
    /// Seed for the per-cell left/right orientation. `None` always puts the
    /// `a` share on the left.
    pub seed: Option<u64>,
}

impl CascadeSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.multiplier_a > 0.5 && self.multiplier_a < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "cascade multiplier must lie in (0.5, 1), got {}",
                self.multiplier_a
            )));
        }
        if self.levels == 0 || self.levels > 30 {
            return Err(Error::InvalidParameter(format!(
                "cascade levels must lie in 1..=30, got {}",
                self.levels
            )));
        }
        Ok(())
    }
}

/// I.i.d. standard Gaussian samples.
pub fn gen_white_noise(n: usize, seed: u64) -> Result<TimeSeries> {
    if n < 64 {
        return Err(Error::InvalidParameter(format!("white noise needs n >= 64, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    TimeSeries::new(format!("white-n{n}-s{seed}"), samples, 1.0)
}

fn fgn_autocovariance(k: usize, hurst: f64) -> f64 {
    let k = k as f64;
    let e = 2.0 * hurst;
    0.5 * ((k + 1.0).powf(e) - 2.0 * k.powf(e) + (k - 1.0).abs().powf(e))
}

/// Fractional Gaussian noise with unit variance by circulant embedding of the
/// exact autocovariance.
pub fn gen_fgn(n: usize, hurst: f64, seed: u64) -> Result<TimeSeries> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::InvalidParameter(format!("Hurst exponent must lie in (0, 1), got {hurst}")));
    }
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("fGn length must be a power of two, got {n}")));
    }
    let m = 2 * n;
    let mut row: Vec<Complex<f64>> = (0..m)
        .map(|j| {
            let k = if j <= n { j } else { m - j };
            Complex::new(fgn_autocovariance(k, hurst), 0.0)
        })
        .collect();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    fft.process(&mut row);

    let scale = row.iter().map(|c| c.re.abs()).fold(0.0, f64::max);
    let min_eigenvalue = row.iter().map(|c| c.re).fold(f64::INFINITY, f64::min);
    if min_eigenvalue < -1e-9 * scale {
        return Err(Error::EmbeddingFailure { min_eigenvalue });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w: Vec<Complex<f64>> = row
        .iter()
        .map(|lambda| {
            let amp = (lambda.re.max(0.0) / m as f64).sqrt();
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex::new(re, im) * amp
        })
        .collect();
    fft.process(&mut w);
    let samples = w.iter().take(n).map(|c| c.re).collect();
    TimeSeries::new(format!("fgn-H{hurst}-n{n}-s{seed}"), samples, 1.0)
}

/// Deterministic binomial multiplicative measure on `2^levels` cells.
pub fn gen_binomial_cascade(spec: &CascadeSpec) -> Result<TimeSeries> {
    spec.validate()?;
    let a = spec.multiplier_a;
    let mut rng = spec.seed.map(ChaCha8Rng::seed_from_u64);
    let mut cells = vec![1.0];
    for _ in 0..spec.levels {
        let mut next = Vec::with_capacity(cells.len() * 2);
        for &v in &cells {
            let (left, right) = (v * a, v * (1.0 - a));
            let swap = rng.as_mut().is_some_and(|r| r.random::<bool>());
            if swap {
                next.extend([right, left]);
            } else {
                next.extend([left, right]);
            }
        }
        cells = next;
    }
    let id = match spec.seed {
        Some(seed) => format!("cascade-a{a}-k{}-s{seed}", spec.levels),
        None => format!("cascade-a{a}-k{}", spec.levels),
    };
    TimeSeries::new(id, cells, 1.0)
}

/// Closed-form generalized Hurst exponent of the binomial cascade,
/// `h(q) = 1/q − log2(a^q + (1−a)^q)/q`. At q = 0 the two one-sided values
/// at `±1e-6` are averaged.
pub fn analytic_binomial_hurst(q: f64, a: f64) -> f64 {
    let closed = |q: f64| (1.0 - (a.powf(q) + (1.0 - a).powf(q)).log2()) / q;
    if q.abs() < Q_ZERO_STEP {
        0.5 * (closed(Q_ZERO_STEP) + closed(-Q_ZERO_STEP))
    } else {
        closed(q)
    }
}
