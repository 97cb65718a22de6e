//! Reference implementations and fixtures shared by the integration tests.
//! Everything here is written from the textbook definitions with plain loops,
//! independent of the library's numerics.

#![allow(dead_code)]

use std::path::Path;

use mfdfa_core::ingest::write_bonn_signal;
use mfdfa_core::synth::{gen_binomial_cascade, gen_fgn, CascadeSpec};

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    x
}

/// Mean squared residual of a least-squares polynomial fit, via the normal
/// equations of a Vandermonde matrix on centred sample positions.
pub fn naive_residual_variance(segment: &[f64], order: usize) -> f64 {
    let s = segment.len();
    let centre = (s as f64 - 1.0) / 2.0;
    let xs: Vec<f64> = (0..s).map(|i| (i as f64 - centre) / s as f64).collect();
    let m = order + 1;
    let mut ata = vec![vec![0.0; m]; m];
    let mut aty = vec![0.0; m];
    for (x, y) in xs.iter().zip(segment) {
        for r in 0..m {
            aty[r] += x.powi(r as i32) * y;
            for c in 0..m {
                ata[r][c] += x.powi((r + c) as i32);
            }
        }
    }
    let coef = solve(ata, aty);
    let mut sum = 0.0;
    for (x, y) in xs.iter().zip(segment) {
        let mut fit = 0.0;
        for (p, c) in coef.iter().enumerate() {
            fit += c * x.powi(p as i32);
        }
        sum += (y - fit) * (y - fit);
    }
    sum / s as f64
}

pub struct NaiveMfdfa {
    /// `[q][scale]`
    pub fluctuation: Vec<Vec<f64>>,
    pub h: Vec<f64>,
    pub tau: Vec<f64>,
    pub alpha: Vec<f64>,
    pub f_alpha: Vec<f64>,
}

pub fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for i in 0..x.len() {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    sxy / sxx
}

/// Derivative of the parabola through three points, evaluated at `at`.
fn parabola_slope(x: [f64; 3], y: [f64; 3], at: f64) -> f64 {
    let mut d = 0.0;
    for i in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&j| j != i).collect();
        let (j, k) = (others[0], others[1]);
        let denom = (x[i] - x[j]) * (x[i] - x[k]);
        d += y[i] * ((at - x[j]) + (at - x[k])) / denom;
    }
    d
}

pub fn naive_mfdfa(samples: &[f64], scales: &[usize], qs: &[f64], order: usize) -> NaiveMfdfa {
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let mut profile = Vec::with_capacity(n);
    let mut acc = 0.0;
    for x in samples {
        acc += x - mean;
        profile.push(acc);
    }
    let mut fluctuation = vec![vec![0.0; scales.len()]; qs.len()];
    for (si, &s) in scales.iter().enumerate() {
        let count = n / s;
        let mut variances = Vec::new();
        for v in 0..count {
            variances.push(naive_residual_variance(&profile[v * s..(v + 1) * s], order));
        }
        for v in 0..count {
            let start = n - (v + 1) * s;
            variances.push(naive_residual_variance(&profile[start..start + s], order));
        }
        for (qi, &q) in qs.iter().enumerate() {
            let m = variances.len() as f64;
            fluctuation[qi][si] = if q == 0.0 {
                (variances.iter().map(|v| v.ln()).sum::<f64>() / (2.0 * m)).exp()
            } else {
                (variances.iter().map(|v| v.powf(q / 2.0)).sum::<f64>() / m).powf(1.0 / q)
            };
        }
    }
    let ln_s: Vec<f64> = scales.iter().map(|&s| (s as f64).ln()).collect();
    let h: Vec<f64> = fluctuation
        .iter()
        .map(|row| slope(&ln_s, &row.iter().map(|f| f.ln()).collect::<Vec<_>>()))
        .collect();
    let tau: Vec<f64> = qs.iter().zip(&h).map(|(q, h)| q * h - 1.0).collect();
    let k = qs.len();
    let dh: Vec<f64> = (0..k)
        .map(|i| {
            let c = i.clamp(1, k - 2);
            parabola_slope([qs[c - 1], qs[c], qs[c + 1]], [h[c - 1], h[c], h[c + 1]], qs[i])
        })
        .collect();
    let alpha: Vec<f64> = (0..k).map(|i| h[i] + qs[i] * dh[i]).collect();
    let f_alpha: Vec<f64> = (0..k).map(|i| qs[i] * (alpha[i] - h[i]) + 1.0).collect();
    NaiveMfdfa {
        fluctuation,
        h,
        tau,
        alpha,
        f_alpha,
    }
}

/// Classic DFA-1 on forward segments only, returning the slope of ln F2.
pub fn plain_dfa(samples: &[f64], scales: &[usize]) -> f64 {
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let mut y = 0.0;
    let profile: Vec<f64> = samples
        .iter()
        .map(|x| {
            y += x - mean;
            y
        })
        .collect();
    let mut ln_f = Vec::new();
    for &s in scales {
        let mut total = 0.0;
        let mut count = 0;
        for seg in profile.chunks_exact(s) {
            let xs: Vec<f64> = (0..s).map(|i| i as f64).collect();
            let b = slope(&xs, seg);
            let mx = xs.iter().sum::<f64>() / s as f64;
            let my = seg.iter().sum::<f64>() / s as f64;
            for (x, v) in xs.iter().zip(seg) {
                let r = v - (my + b * (x - mx));
                total += r * r;
            }
            count += s;
        }
        ln_f.push((total / count as f64).sqrt().ln());
    }
    let ln_s: Vec<f64> = scales.iter().map(|&s| (s as f64).ln()).collect();
    slope(&ln_s, &ln_f)
}

/// Closed-form generalized Hurst exponent of the binomial cascade.
pub fn cascade_hurst(q: f64, a: f64) -> f64 {
    let b = 1.0 - a;
    if q == 0.0 {
        -(a * b).log2() / 2.0
    } else {
        (1.0 - (a.powf(q) + b.powf(q)).log2()) / q
    }
}

/// Writes a five-set archive in the distributed folder layout. Each set has
/// its own generator so that every problem is learnable.
pub fn write_synthetic_archive(root: &Path, per_set: usize, levels: u32) {
    let n = 1usize << levels;
    let sets: [(&str, &str); 5] = [("Z", "Z"), ("O", "O"), ("N", "N"), ("F", "F"), ("S", "S")];
    for (k, (folder, prefix)) in sets.iter().enumerate() {
        let dir = root.join(folder);
        std::fs::create_dir_all(&dir).unwrap();
        for i in 0..per_set {
            let seed = (k * 1000 + i) as u64;
            let samples = match k {
                0 => gen_fgn(n, 0.85, seed).unwrap().samples,
                1 => gen_fgn(n, 0.75, seed).unwrap().samples,
                2 => gen_fgn(n, 0.5, seed).unwrap().samples,
                3 => gen_fgn(n, 0.4, seed).unwrap().samples,
                _ => {
                    let spec = CascadeSpec {
                        levels,
                        multiplier_a: 0.75,
                        seed: Some(seed),
                    };
                    gen_binomial_cascade(&spec).unwrap().samples
                }
            };
            write_bonn_signal(&dir.join(format!("{prefix}{:03}.txt", i + 1)), &samples).unwrap();
        }
    }
}
