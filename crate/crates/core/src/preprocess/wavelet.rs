//! Discrete wavelet decomposition (analysis only) with the db4 filter.
//!
//! The db4 taps are not hardcoded: they are derived at first use from the
//! standard Daubechies construction (spectral factorization of the
//! half-band polynomial, minimum-phase root selection) and checked against
//! the orthonormal-filter identities to 1e-12. Analysis runs the pyramid
//! algorithm: convolve with the low/high analysis pair, downsample by two,
//! recurse on the approximation.
//!
//! Three boundary handlings are provided. `Periodic` treats the input as
//! circular, which keeps the transform exactly orthogonal (energy
//! preserving) when every level's length is even, and annihilates constant
//! signals exactly; it is the default. `Zero` extends with zeros: also
//! exactly energy preserving for any length, but detail bands see the edge
//! step. `Symmetric` mirrors the edges: no edge step, but slightly
//! redundant, so energy is only approximately preserved.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};

pub const DB4_TAPS: usize = 8;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum BoundaryMode {
    #[default]
    Periodic,
    Symmetric,
    Zero,
}

impl fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryMode::Periodic => "periodic",
            BoundaryMode::Symmetric => "symmetric",
            BoundaryMode::Zero => "zero",
        })
    }
}

impl FromStr for BoundaryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "periodic" | "per" => Ok(BoundaryMode::Periodic),
            "symmetric" | "sym" => Ok(BoundaryMode::Symmetric),
            "zero" | "zpd" => Ok(BoundaryMode::Zero),
            other => Err(Error::Config(format!(
                "unknown boundary mode {other:?}, expected periodic, symmetric or zero"
            ))),
        }
    }
}

/// Detail and approximation coefficients of a multi-level decomposition.
#[derive(Debug, Clone)]
pub struct SubbandSet {
    /// `details[0]` is D1 (finest scale).
    pub details: Vec<Vec<f64>>,
    /// Approximation at the coarsest level.
    pub approx: Vec<f64>,
    pub wavelet: String,
    pub levels: usize,
    pub mode: BoundaryMode,
}

impl SubbandSet {
    /// Bands in fixed order: d1..dL, then aL.
    pub fn bands(&self) -> Vec<(String, &[f64])> {
        let mut out: Vec<(String, &[f64])> = self
            .details
            .iter()
            .enumerate()
            .map(|(i, d)| (format!("d{}", i + 1), d.as_slice()))
            .collect();
        out.push((format!("a{}", self.levels), self.approx.as_slice()));
        out
    }

    pub fn total_energy(&self) -> f64 {
        self.details.iter().map(|d| energy(d)).sum::<f64>() + energy(&self.approx)
    }
}

pub fn energy(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Minimum-phase db4 scaling coefficients, h(1) = sqrt(2).
///
/// Construction: the half-band polynomial P(y) = sum_{k<4} C(3+k,k) y^k is
/// factored by mapping each root y to the root of z^2 - (2-4y)z + 1 = 0
/// inside the unit circle; the scaling filter is then
/// sqrt(2) * ((1+z)/2)^4 * Q(z)/Q(1) with Q the monic polynomial over the
/// selected roots.
fn db4_scaling() -> [f64; DB4_TAPS] {
    // Roots of 20 y^3 + 10 y^2 + 4 y + 1 = 0: one real, one conjugate pair.
    let (b, c, d): (f64, f64, f64) = (0.5, 0.2, 0.05); // monic normalization
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let delta = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
    debug_assert!(delta > 0.0, "db4 half-band cubic has one real root");
    let sd = delta.sqrt();
    let y_real = (-q / 2.0 + sd).cbrt() + (-q / 2.0 - sd).cbrt() - b / 3.0;
    // Deflate: remaining quadratic 20 y^2 + qb y + qc.
    let qb = 10.0 + 20.0 * y_real;
    let qc = -1.0 / y_real; // product of all three roots is -1/20
    let disc = Complex64::new(qb * qb - 80.0 * qc, 0.0).sqrt();
    let y_c1 = (Complex64::new(-qb, 0.0) + disc) / 40.0;
    let y_c2 = (Complex64::new(-qb, 0.0) - disc) / 40.0;

    let unit_circle_root = |y: Complex64| -> Complex64 {
        let c2 = Complex64::new(1.0, 0.0) - y * 2.0;
        let s = (c2 * c2 - 1.0).sqrt();
        let z1 = c2 + s;
        let z2 = c2 - s;
        if z1.norm() <= z2.norm() {
            z1
        } else {
            z2
        }
    };

    let roots = [
        unit_circle_root(Complex64::new(y_real, 0.0)),
        unit_circle_root(y_c1),
        unit_circle_root(y_c2),
    ];

    // Q(z) as ascending-power coefficients.
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (i, coef) in poly.iter().enumerate() {
            next[i] -= coef * r;
            next[i + 1] += coef;
        }
        poly = next;
    }
    let q1: Complex64 = poly.iter().sum();

    // Multiply by ((1+z)/2)^4 = (1 + 4z + 6z^2 + 4z^3 + z^4)/16.
    let binom = [1.0, 4.0, 6.0, 4.0, 1.0];
    let mut full = [Complex64::new(0.0, 0.0); DB4_TAPS];
    for (i, coef) in poly.iter().enumerate() {
        for (j, w) in binom.iter().enumerate() {
            full[i + j] += coef * (w / 16.0);
        }
    }
    let scale = Complex64::new(std::f64::consts::SQRT_2, 0.0) / q1;
    let mut h = [0.0; DB4_TAPS];
    for (i, coef) in full.iter().enumerate() {
        let v = coef * scale;
        debug_assert!(v.im.abs() < 1e-12);
        h[i] = v.re;
    }
    // Orient with the dominant taps first (minimum-phase convention).
    if h[0].abs() < h[DB4_TAPS - 1].abs() {
        h.reverse();
    }
    h
}

/// Analysis filter pair (low, high) for the named wavelet.
pub fn wavelet_filters(name: &str) -> Result<(&'static [f64], &'static [f64])> {
    static FILTERS: OnceLock<([f64; DB4_TAPS], [f64; DB4_TAPS])> = OnceLock::new();
    if name != "db4" {
        return Err(Error::InvalidParam(format!(
            "unknown wavelet {name:?}; supported: db4"
        )));
    }
    let (lo, hi) = FILTERS.get_or_init(|| {
        let h = db4_scaling();
        let mut lo = [0.0; DB4_TAPS];
        let mut hi = [0.0; DB4_TAPS];
        for n in 0..DB4_TAPS {
            lo[n] = h[DB4_TAPS - 1 - n];
            hi[n] = if n % 2 == 0 { h[n] } else { -h[n] };
        }
        check_tap_identities(&lo, &hi);
        (lo, hi)
    });
    Ok((lo.as_slice(), hi.as_slice()))
}

/// Orthonormal-filter self-checks, all to 1e-12: low-pass sums to sqrt(2)
/// with unit energy and is orthogonal to its even shifts; the high-pass
/// kills polynomials of degree < 4 (four vanishing moments).
fn check_tap_identities(lo: &[f64], hi: &[f64]) {
    let tol = 1e-12;
    let sum: f64 = lo.iter().sum();
    assert!(
        (sum - std::f64::consts::SQRT_2).abs() < tol,
        "low-pass sum {sum}"
    );
    let sumsq: f64 = lo.iter().map(|v| v * v).sum();
    assert!((sumsq - 1.0).abs() < tol, "low-pass energy {sumsq}");
    for shift in [2usize, 4, 6] {
        let dot: f64 = (0..DB4_TAPS - shift).map(|n| lo[n] * lo[n + shift]).sum();
        assert!(dot.abs() < tol, "shift-{shift} autocorrelation {dot}");
    }
    for p in 0..4 {
        let moment: f64 = hi
            .iter()
            .enumerate()
            .map(|(k, v)| (k as f64).powi(p) * v)
            .sum();
        assert!(
            moment.abs() < tol,
            "vanishing moment p={p} violated: {moment}"
        );
    }
}

/// One analysis level: returns (approximation, detail).
fn analyze_level(x: &[f64], lo: &[f64], hi: &[f64], mode: BoundaryMode) -> (Vec<f64>, Vec<f64>) {
    match mode {
        BoundaryMode::Periodic => {
            let mut xe;
            let xs = if x.len() % 2 == 1 {
                // Odd length: repeat the final sample once so the circular
                // transform has an even period.
                xe = Vec::with_capacity(x.len() + 1);
                xe.extend_from_slice(x);
                xe.push(x[x.len() - 1]);
                xe.as_slice()
            } else {
                x
            };
            let ne = xs.len();
            let half = ne / 2;
            let conv = |f: &[f64]| -> Vec<f64> {
                (0..half)
                    .map(|k| {
                        let base = 2 * k + 1;
                        // Filter never exceeds the (extended) length here.
                        f.iter()
                            .enumerate()
                            .map(|(m, &fm)| fm * xs[(base + ne - m) % ne])
                            .sum()
                    })
                    .collect()
            };
            (conv(lo), conv(hi))
        }
        BoundaryMode::Symmetric => {
            let n = x.len();
            let e = lo.len() - 1;
            // Half-point mirror: ... x1 x0 | x0 x1 ... xn-1 | xn-1 xn-2 ...
            let ext: Vec<f64> = (0..n + 2 * e)
                .map(|i| {
                    let t = i as isize - e as isize;
                    let m = if t < 0 {
                        (-t - 1) as usize
                    } else if t as usize >= n {
                        2 * n - 1 - t as usize
                    } else {
                        t as usize
                    };
                    x[m]
                })
                .collect();
            let full_len = n + e; // valid convolution over the extension
            let conv = |f: &[f64]| -> Vec<f64> {
                (0..full_len / 2)
                    .map(|k| {
                        let i = 2 * k + 1;
                        f.iter()
                            .enumerate()
                            .map(|(m, &fm)| fm * ext[i + e - m])
                            .sum()
                    })
                    .collect()
            };
            (conv(lo), conv(hi))
        }
        BoundaryMode::Zero => {
            let n = x.len();
            let l = lo.len();
            let out_len = (n + l - 1) / 2;
            let conv = |f: &[f64]| -> Vec<f64> {
                (0..out_len)
                    .map(|k| {
                        let j = 2 * k + 1;
                        let mut acc = 0.0;
                        for (m, &fm) in f.iter().enumerate() {
                            if j >= m && j - m < n {
                                acc += fm * x[j - m];
                            }
                        }
                        acc
                    })
                    .collect()
            };
            (conv(lo), conv(hi))
        }
    }
}

/// Multi-level pyramid decomposition.
///
/// Every level needs at least as many input samples as filter taps; with
/// db4's 8 taps a 5-level decomposition needs a signal of at least 8*2^4
/// samples or so, which EEG segments comfortably exceed.
pub fn dwt_decompose(
    signal: &[f64],
    wavelet: &str,
    levels: usize,
    mode: BoundaryMode,
) -> Result<SubbandSet> {
    let (lo, hi) = wavelet_filters(wavelet)?;
    if levels == 0 {
        return Err(Error::InvalidParam("levels must be >= 1".into()));
    }
    let mut current = signal.to_vec();
    let mut details = Vec::with_capacity(levels);
    for _ in 0..levels {
        if current.len() < lo.len() {
            return Err(Error::TooShort {
                what: "wavelet decomposition level",
                needed: lo.len(),
                got: current.len(),
            });
        }
        let (approx, detail) = analyze_level(&current, lo, hi, mode);
        details.push(detail);
        current = approx;
    }
    Ok(SubbandSet {
        details,
        approx: current,
        wavelet: wavelet.to_string(),
        levels,
        mode,
    })
}
