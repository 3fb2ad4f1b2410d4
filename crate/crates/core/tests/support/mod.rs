//! Shared helpers for the acceptance suite: signal generators and
//! deliberately naive reference implementations, written from the
//! formulas with no attention to cost, to check the real ones against.

// Compiled into each test binary; none of them uses every helper.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn uniform_noise(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn henon_x(n: usize) -> Vec<f64> {
    let (mut x, mut y) = (0.1f64, 0.1f64);
    let mut out = Vec::with_capacity(n);
    for i in 0..n + 100 {
        let xn = 1.0 - 1.4 * x * x + y;
        y = 0.3 * x;
        x = xn;
        if i >= 100 {
            out.push(x);
        }
    }
    out
}

pub fn population_sd(x: &[f64]) -> f64 {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / x.len() as f64).sqrt()
}

fn chebyshev(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// phi^m as a plain double loop over all template pairs, self included.
fn app_phi(x: &[f64], m: usize, r: f64) -> f64 {
    let count = x.len() - m + 1;
    let mut sum = 0.0;
    for i in 0..count {
        let mut matches = 0usize;
        for j in 0..count {
            if chebyshev(&x[i..i + m], &x[j..j + m]) <= r {
                matches += 1;
            }
        }
        sum += ((matches as f64) / count as f64).ln();
    }
    sum / count as f64
}

pub fn app_en(x: &[f64], m: usize, r: f64) -> f64 {
    app_phi(x, m, r) - app_phi(x, m + 1, r)
}

/// Unordered pair match counts at lengths m and m+1, both over the
/// first N-m template starts. None when the ratio is undefined.
pub fn samp_en(x: &[f64], m: usize, r: f64) -> (usize, usize, Option<f64>) {
    let count = x.len() - m;
    let mut b = 0usize;
    let mut a = 0usize;
    for i in 0..count {
        for j in i + 1..count {
            if chebyshev(&x[i..i + m], &x[j..j + m]) <= r {
                b += 1;
            }
            if chebyshev(&x[i..i + m + 1], &x[j..j + m + 1]) <= r {
                a += 1;
            }
        }
    }
    let value = (a > 0 && b > 0).then(|| -((a as f64) / (b as f64)).ln());
    (b, a, value)
}

/// Mean similarity of the `count` mean-subtracted length-m windows; the
/// same window count is used at both orders, so it is a parameter.
fn fuzzy_phi(x: &[f64], count: usize, m: usize, n_grad: u32, r: f64) -> f64 {
    let centered: Vec<Vec<f64>> = (0..count)
        .map(|i| {
            let w = &x[i..i + m];
            let mean = w.iter().sum::<f64>() / m as f64;
            w.iter().map(|v| v - mean).collect()
        })
        .collect();
    let mut sum = 0.0;
    for i in 0..count {
        for j in 0..count {
            if i == j {
                continue;
            }
            let d = chebyshev(&centered[i], &centered[j]);
            sum += (-(d / r).powi(n_grad as i32)).exp();
        }
    }
    sum / (count * (count - 1)) as f64
}

pub fn fuzzy_en(x: &[f64], m: usize, n_grad: u32, r: f64) -> f64 {
    let count = x.len() - m;
    fuzzy_phi(x, count, m, n_grad, r).ln() - fuzzy_phi(x, count, m + 1, n_grad, r).ln()
}

pub fn shannon_en(x: &[f64], bins: usize) -> f64 {
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut counts = vec![0usize; bins];
    for &v in x {
        let mut b = ((v - lo) / (hi - lo) * bins as f64) as usize;
        if b >= bins {
            b = bins - 1;
        }
        counts[b] += 1;
    }
    -counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / x.len() as f64;
            p * p.log2()
        })
        .sum::<f64>()
}

pub fn perm_en(x: &[f64], order: usize, delay: usize) -> f64 {
    let span = (order - 1) * delay;
    let mut patterns: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let total = x.len() - span;
    for t in 0..total {
        let mut idx: Vec<usize> = (0..order).collect();
        idx.sort_by(|&a, &b| {
            x[t + a * delay]
                .partial_cmp(&x[t + b * delay])
                .unwrap()
                .then(a.cmp(&b))
        });
        *patterns.entry(idx).or_insert(0) += 1;
    }
    -patterns
        .values()
        .map(|&c| {
            let p = c as f64 / total as f64;
            p * p.log2()
        })
        .sum::<f64>()
}

pub fn norm_en(x: &[f64], p: f64) -> f64 {
    x.iter().map(|v| v.abs().powf(p)).sum()
}

pub fn thresh_en(x: &[f64], threshold: f64) -> f64 {
    x.iter().filter(|v| v.abs() > threshold).count() as f64
}

pub fn sure_en(x: &[f64], eps: f64) -> f64 {
    let n = x.len() as f64;
    let below = x.iter().filter(|v| v.abs() <= eps).count() as f64;
    let clipped: f64 = x.iter().map(|v| (v * v).min(eps * eps)).sum();
    n - below + clipped
}

pub fn log_energy_en(x: &[f64]) -> f64 {
    x.iter().filter(|&&v| v != 0.0).map(|v| (v * v).ln()).sum()
}
