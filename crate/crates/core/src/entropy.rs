//! Ten entropy measures computed on coefficient vectors.
//!
//! The template-based family (approximate, sample, fuzzy) counts repeating
//! length-m patterns under a tolerance; the histogram family (Shannon,
//! spectral, permutation) measures distributional spread; the remaining
//! four (norm, threshold, SURE, log-energy) are direct coefficient
//! functionals. Tolerances are taken as absolute values here; callers that
//! want tolerances in standard-deviation units scale them against the
//! specific input vector first (see [`entropy_features`]).

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Feature order used everywhere a "vector of the ten entropies" appears.
pub const ENTROPY_NAMES: [&str; 10] = [
    "app_en", "samp_en", "fuzzy_en", "shan_en", "spec_en", "perm_en", "norm_en", "thresh_en",
    "sure_en", "log_en",
];

/// Population (1/N) standard deviation.
pub fn population_sd(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    (x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt()
}

/// Approximate entropy: phi(m) - phi(m+1) with self-matches included.
///
/// phi(k) averages ln(C_i) over the N-k+1 templates, where C_i is the
/// fraction of templates within Chebyshev distance `r_abs` of template i
/// (template i itself counts). Requires `x.len() >= m + 2` and
/// `r_abs > 0`.
pub fn app_en(x: &[f64], m: usize, r_abs: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidParam("pattern length m must be >= 1".into()));
    }
    if !(r_abs > 0.0) {
        return Err(Error::InvalidParam(format!(
            "tolerance must be > 0, got {r_abs}"
        )));
    }
    let n = x.len();
    if n < m + 2 {
        return Err(Error::TooShort {
            what: "approximate entropy",
            needed: m + 2,
            got: n,
        });
    }

    // One pass over template pairs serves both pattern lengths: a length
    // m+1 match is a length-m match whose next coordinates also agree.
    let count_m = n - m + 1;
    let count_m1 = n - m;
    let mut c_m = vec![1u32; count_m]; // self-matches
    let mut c_m1 = vec![1u32; count_m1];
    for i in 0..count_m {
        for j in i + 1..count_m {
            let mut within = true;
            for k in 0..m {
                if (x[i + k] - x[j + k]).abs() > r_abs {
                    within = false;
                    break;
                }
            }
            if within {
                c_m[i] += 1;
                c_m[j] += 1;
                if j < count_m1 && (x[i + m] - x[j + m]).abs() <= r_abs {
                    c_m1[i] += 1;
                    c_m1[j] += 1;
                }
            }
        }
    }

    let phi = |c: &[u32]| {
        let total = c.len() as f64;
        c.iter().map(|&v| (v as f64 / total).ln()).sum::<f64>() / total
    };
    Ok(phi(&c_m) - phi(&c_m1))
}

/// Sample entropy: -ln(A/B) over unordered template pairs, self-matches
/// excluded.
///
/// B counts pairs of length-m templates within Chebyshev distance `r_abs`,
/// A the same at length m+1; both draw template starts from
/// `0..x.len()-m` so every template has an m+1 extension. Errors with the
/// two counts when either is zero.
pub fn samp_en(x: &[f64], m: usize, r_abs: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidParam("pattern length m must be >= 1".into()));
    }
    if !(r_abs > 0.0) {
        return Err(Error::InvalidParam(format!(
            "tolerance must be > 0, got {r_abs}"
        )));
    }
    let n = x.len();
    if n < m + 2 {
        return Err(Error::TooShort {
            what: "sample entropy",
            needed: m + 2,
            got: n,
        });
    }

    let count = n - m;
    let mut b = 0usize;
    let mut a = 0usize;
    for i in 0..count {
        for j in i + 1..count {
            let mut within = true;
            for k in 0..m {
                if (x[i + k] - x[j + k]).abs() > r_abs {
                    within = false;
                    break;
                }
            }
            if within {
                b += 1;
                if (x[i + m] - x[j + m]).abs() <= r_abs {
                    a += 1;
                }
            }
        }
    }
    if a == 0 || b == 0 {
        return Err(Error::UndefinedEntropy {
            matches_m: b,
            matches_m1: a,
        });
    }
    Ok(-((a as f64 / b as f64).ln()))
}

/// Fuzzy entropy: ln phi(m) - ln phi(m+1) with a graded match.
///
/// Templates are mean-subtracted; the similarity of a pair is
/// exp(-(d/r)^n) with Chebyshev d, so every pair contributes. phi(k)
/// averages the similarity over ordered pairs i != j with both template
/// starts in `0..x.len()-m`.
pub fn fuzzy_en(x: &[f64], m: usize, n_grad: u32, r_abs: f64) -> Result<f64> {
    if m == 0 || n_grad == 0 {
        return Err(Error::InvalidParam(
            "fuzzy entropy needs m >= 1 and gradient n >= 1".into(),
        ));
    }
    if !(r_abs > 0.0) {
        return Err(Error::InvalidParam(format!(
            "tolerance must be > 0, got {r_abs}"
        )));
    }
    let n = x.len();
    if n < m + 2 {
        return Err(Error::TooShort {
            what: "fuzzy entropy",
            needed: m + 2,
            got: n,
        });
    }

    let count = n - m;
    // Centered templates at both lengths, laid out contiguously.
    let centered = |len: usize| -> Vec<f64> {
        let mut out = Vec::with_capacity(count * len);
        for i in 0..count {
            let mean = x[i..i + len].iter().sum::<f64>() / len as f64;
            out.extend(x[i..i + len].iter().map(|v| v - mean));
        }
        out
    };
    let t_m = centered(m);
    let t_m1 = centered(m + 1);

    let mean_similarity = |t: &[f64], len: usize| -> f64 {
        let mut total = 0.0;
        for i in 0..count {
            let ti = &t[i * len..(i + 1) * len];
            for j in i + 1..count {
                let tj = &t[j * len..(j + 1) * len];
                let mut d = 0.0f64;
                for k in 0..len {
                    d = d.max((ti[k] - tj[k]).abs());
                }
                total += (-(d / r_abs).powi(n_grad as i32)).exp();
            }
        }
        // Ordered-pair average; each unordered pair appears twice.
        2.0 * total / (count as f64 * (count - 1) as f64)
    };
    let phi_m = mean_similarity(&t_m, m);
    let phi_m1 = mean_similarity(&t_m1, m + 1);
    Ok(phi_m.ln() - phi_m1.ln())
}

/// Bin index on an equal-width grid over [min, max]; the max itself lands
/// in the top bin.
fn bin_of(v: f64, min: f64, range: f64, bins: usize) -> usize {
    let t = ((v - min) / range * bins as f64) as usize;
    t.min(bins - 1)
}

/// Shannon entropy in bits of the equal-width amplitude histogram.
pub fn shannon_en(x: &[f64], bins: usize) -> Result<f64> {
    if bins < 2 {
        return Err(Error::InvalidParam(format!(
            "histogram needs >= 2 bins, got {bins}"
        )));
    }
    if x.is_empty() {
        return Err(Error::EmptyInput("shannon entropy".into()));
    }
    let (min, max) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if max - min <= 0.0 {
        return Err(Error::ConstantSignal("shannon entropy"));
    }
    let mut counts = vec![0u32; bins];
    for &v in x {
        counts[bin_of(v, min, max - min, bins)] += 1;
    }
    let n = x.len() as f64;
    Ok(counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum())
}

/// Spectral entropy of the one-sided periodogram, normalized into [0, 1].
///
/// The signal is mean-removed, so the DC bin is empty and the frequency
/// bins k = 1..=N/2 carry all the power; their normalized distribution's
/// Shannon entropy (nats) is divided by ln of the bin count.
pub fn spectral_en(x: &[f64]) -> Result<f64> {
    let n = x.len();
    if n < 8 {
        return Err(Error::TooShort {
            what: "spectral entropy",
            needed: 8,
            got: n,
        });
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let bins = n / 2;
    let power: Vec<f64> = (1..=bins).map(|k| buf[k].norm_sqr()).collect();
    let total: f64 = power.iter().sum();
    if total <= 0.0 {
        return Err(Error::ConstantSignal("spectral entropy"));
    }
    let h: f64 = power
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| {
            let q = p / total;
            -q * q.ln()
        })
        .sum();
    Ok(h / (bins as f64).ln())
}

/// Permutation entropy in bits over rank patterns of sliding windows.
///
/// A window of `order` samples spaced `delay` apart is reduced to its
/// rank pattern (stable: equal samples rank by time), and the pattern
/// distribution's entropy is returned. Bounded by log2(order!).
pub fn perm_en(x: &[f64], order: usize, delay: usize) -> Result<f64> {
    if !(2..=10).contains(&order) || delay == 0 {
        return Err(Error::InvalidParam(format!(
            "permutation entropy needs order in 2..=10 and delay >= 1, got {order}, {delay}"
        )));
    }
    let n = x.len();
    let span = (order - 1) * delay;
    if n < span + 2 {
        return Err(Error::TooShort {
            what: "permutation entropy",
            needed: span + 2,
            got: n,
        });
    }

    let factorial: usize = (1..=order).product();
    let mut counts = vec![0u32; factorial];
    let windows = n - span;
    let mut idx: Vec<usize> = Vec::with_capacity(order);
    for t in 0..windows {
        idx.clear();
        idx.extend(0..order);
        // Stable by construction: ties keep index order.
        idx.sort_by(|&a, &b| x[t + a * delay].total_cmp(&x[t + b * delay]));
        // idx is the permutation; pack it into its factorial-base code.
        let mut code = 0usize;
        for a in 0..order {
            let mut smaller_later = 0usize;
            for b in a + 1..order {
                if idx[b] < idx[a] {
                    smaller_later += 1;
                }
            }
            code = code * (order - a) + smaller_later;
        }
        counts[code] += 1;
    }
    let total = windows as f64;
    Ok(counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum())
}

/// Sum of |x_i|^p for p >= 1.
pub fn norm_en(x: &[f64], p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParam(format!("norm power must be >= 1, got {p}")));
    }
    // Integer powers take the exact path.
    let sum = if p.fract() == 0.0 && p <= 32.0 {
        let ip = p as i32;
        x.iter().map(|v| v.abs().powi(ip)).sum()
    } else {
        x.iter().map(|v| v.abs().powf(p)).sum()
    };
    Ok(sum)
}

/// Number of samples with |x_i| strictly above the threshold.
pub fn thresh_en(x: &[f64], threshold: f64) -> Result<f64> {
    if !(threshold > 0.0) {
        return Err(Error::InvalidParam(format!(
            "threshold must be > 0, got {threshold}"
        )));
    }
    Ok(x.iter().filter(|v| v.abs() > threshold).count() as f64)
}

/// SURE entropy: N - #{|x_i| <= eps} + sum of min(x_i^2, eps^2).
pub fn sure_en(x: &[f64], eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParam(format!("eps must be > 0, got {eps}")));
    }
    let below = x.iter().filter(|v| v.abs() <= eps).count();
    let risk: f64 = x.iter().map(|v| (v * v).min(eps * eps)).sum();
    Ok(x.len() as f64 - below as f64 + risk)
}

/// Log-energy entropy: sum of ln(x_i^2), with zero coefficients
/// contributing 0 instead of negative infinity.
pub fn log_energy_en(x: &[f64]) -> f64 {
    x.iter()
        .filter(|&&v| v != 0.0)
        // 2 ln|x| equals ln(x^2) without squaring, which would underflow
        // for |x| below about 1e-154.
        .map(|v| 2.0 * v.abs().ln())
        .sum()
}

/// Parameters for the full ten-entropy evaluation. Tolerances `r` and
/// `fuzzy_r` are in units of the input vector's population SD.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyParams {
    pub m: usize,
    pub r: f64,
    pub fuzzy_n: u32,
    pub fuzzy_r: f64,
    pub perm_order: usize,
    pub perm_delay: usize,
    pub norm_p: f64,
    pub thresh_p: f64,
    pub sure_eps: f64,
    pub shan_bins: usize,
}

impl Default for EntropyParams {
    fn default() -> Self {
        EntropyParams {
            m: 2,
            r: 0.2,
            fuzzy_n: 2,
            fuzzy_r: 0.15,
            perm_order: 3,
            perm_delay: 1,
            norm_p: 2.0,
            thresh_p: 0.2,
            sure_eps: 3.0,
            shan_bins: 16,
        }
    }
}

/// All ten entropies of one vector, in [`ENTROPY_NAMES`] order.
///
/// The tolerance-based measures receive `r * sd` and `fuzzy_r * sd` where
/// sd is the population SD of `x` itself, so the tolerances adapt to each
/// decomposed sub-band. Errors from any single measure propagate
/// (a constant vector, for instance, has no histogram or spectral
/// entropy).
pub fn entropy_features(x: &[f64], params: &EntropyParams) -> Result<[f64; 10]> {
    let sd = population_sd(x);
    Ok([
        app_en(x, params.m, params.r * sd)?,
        samp_en(x, params.m, params.r * sd)?,
        fuzzy_en(x, params.m, params.fuzzy_n, params.fuzzy_r * sd)?,
        shannon_en(x, params.shan_bins)?,
        spectral_en(x)?,
        perm_en(x, params.perm_order, params.perm_delay)?,
        norm_en(x, params.norm_p)?,
        thresh_en(x, params.thresh_p)?,
        sure_en(x, params.sure_eps)?,
        log_energy_en(x),
    ])
}
